"""Command-line surface: deterministic CSV/JSON reports over wedge profiles.

Every subcommand loads a profile document, computes fully in memory, and
only then writes its artifact, so failures leave no partial outputs.
When results go to a file, a rendered figure lands next to it (same
name, .png); --no-plot suppresses that.  Exit codes: 0 success, 2
validation problem, 3 solver failure.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import __version__
from .classify import (
    DEFAULT_RECURRENT_THRESHOLD,
    DEFAULT_TRANSIENT_INCREMENT,
    DEFAULT_TRANSIENT_TAIL,
    classify,
)
from .errors import SchemaError, SolverFailureError, WedgewalkError
from .flow import anchored_flow, layer_up_value
from .geometry import layer_counts, layer_size_bounds, origin
from .network import (
    effective_resistance,
    green_diagonal,
    resistance_lower_bound,
    shorted_lower_bound,
)
from .profiles import (
    PROFILE_SCHEMA_HINT,
    Profile,
    Staircase,
    box_sizes,
    derive_staircase,
    validate_profile,
)
from .walker import WalkConfig, collision_run, green_mc


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _load_profile(path: str) -> Profile:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise click.UsageError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"config {path} is not valid JSON: {exc}")
    return validate_profile(raw)


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.UsageError(f"{flag} expects comma-separated integers, got {text!r}")
    if not values:
        raise click.UsageError(f"{flag} must list at least one integer")
    return values


def _thread_count() -> int:
    raw = os.environ.get("WEDGEWALK_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise click.UsageError(f"WEDGEWALK_THREADS must be an integer, got {raw!r}")


def _csv_text(header: list[str], rows: list[list[str]], trailer: list[str] | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if trailer:
        text += "".join(f"# {line}\n" for line in trailer)
    return text


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SolverFailureError as exc:
            click.echo(f"solver failure: {exc}", err=True)
            raise SystemExit(3)
        except SchemaError as exc:
            click.echo(f"invalid profile: {exc}", err=True)
            click.echo(f"expected schema: {PROFILE_SCHEMA_HINT}", err=True)
            raise SystemExit(2)
        except (WedgewalkError, ValueError) as exc:
            click.echo(f"validation error: {exc}", err=True)
            raise SystemExit(2)

    return wrapper


def _stairs_for(profile: Profile, levels: int) -> Staircase:
    return derive_staircase(profile, levels)


config_option = click.option(
    "--config", required=True, help="path to a profile JSON document"
)
out_option = click.option(
    "--out", default=None, help="output file (default: stdout, no figure)"
)
plot_option = click.option(
    "--plot/--no-plot", "plot", default=True, help="render a figure next to --out"
)


@click.group()
@click.version_option(version=__version__, prog_name="wedgewalk")
def main() -> None:
    """Wedge random-walk toolkit: recurrence verdicts, resistance bounds,
    explicit flows, and Monte Carlo collision evidence."""


@main.command("classify")
@config_option
@click.option("--n-max", default=100000, show_default=True, help="series terms to sum")
@click.option(
    "--recurrent-threshold",
    default=DEFAULT_RECURRENT_THRESHOLD,
    show_default=True,
    help="minimum relative growth per doubling to call recurrence",
)
@click.option(
    "--transient-threshold",
    default=DEFAULT_TRANSIENT_TAIL,
    show_default=True,
    help="maximum extrapolated tail (relative) to call transience",
)
@click.option(
    "--transient-increment",
    default=DEFAULT_TRANSIENT_INCREMENT,
    show_default=True,
    help="maximum relative growth per doubling to call transience",
)
@out_option
@plot_option
@_guarded
def classify_cmd(
    config: str,
    n_max: int,
    recurrent_threshold: float,
    transient_threshold: float,
    transient_increment: float,
    out: str | None,
    plot: bool,
) -> None:
    """Sum the recurrence series and report a verdict as JSON."""
    profile = _load_profile(config)
    stairs = _stairs_for(profile, n_max)
    report = classify(
        stairs,
        profile,
        n_max,
        recurrent_threshold=recurrent_threshold,
        transient_tail=transient_threshold,
        transient_increment=transient_increment,
    )
    payload = {
        "verdict": report.verdict,
        "sums": [[n, s] for n, s in report.sums],
        "rationale": report.rationale,
    }
    _emit(json.dumps(payload, indent=2) + "\n", out)
    if out is not None and plot:
        from .plotting import save_classify_figure

        save_classify_figure(list(report.sums), report.verdict, out)


@main.command("partition")
@config_option
@click.option("--r", "r", default=12, show_default=True, help="largest layer to report")
@out_option
@plot_option
@_guarded
def partition_cmd(config: str, r: int, out: str | None, plot: bool) -> None:
    """Tabulate layer sizes against their proven sandwich, layers 0..r."""
    if r < 0:
        raise ValueError(f"--r must be >= 0, got {r}")
    profile = _load_profile(config)
    stairs = _stairs_for(profile, r)
    sizes = layer_counts(stairs, r + 1)
    lower, upper = layer_size_bounds(stairs, r + 1)
    products = box_sizes(stairs, r + 1)
    rows = []
    dict_rows = []
    for n in range(r + 1):
        row = {
            "n": n,
            "layer_size": int(sizes[n]),
            "lower_bound": int(lower[n]),
            "upper_bound": int(upper[n]),
            "product": int(products[n]),
        }
        dict_rows.append(row)
        rows.append([str(row[k]) for k in ("n", "layer_size", "lower_bound", "upper_bound", "product")])
    text = _csv_text(["n", "layer_size", "lower_bound", "upper_bound", "product"], rows)
    _emit(text, out)
    if out is not None and plot:
        from .plotting import save_partition_figure

        save_partition_figure(dict_rows, out)


def _sandwich_rows(profile: Profile, r_values: list[int], tol: float) -> list[dict]:
    if min(r_values) < 1:
        raise ValueError(f"--r values must be >= 1, got {min(r_values)}")
    stairs = _stairs_for(profile, max(r_values))

    def one(r: int) -> dict:
        from .flow import resistance_upper_bound

        exact = effective_resistance(stairs, r, tol=tol)
        return {
            "r": r,
            "R_exact": exact.value,
            "lower_bound_product": resistance_lower_bound(stairs, r),
            "shorted_bound": shorted_lower_bound(stairs, r),
            "flow_energy_upper": resistance_upper_bound(stairs, r).energy,
            "residual": exact.residual,
        }

    workers = min(_thread_count(), len(r_values))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, r_values))
    return [one(r) for r in r_values]


@main.command("resistance")
@config_option
@click.option("--r", "r_text", default="4,8,12", show_default=True, help="comma list of truncation layers")
@click.option("--tol", default=1e-10, show_default=True, help="solver residual tolerance")
@out_option
@plot_option
@_guarded
def resistance_cmd(config: str, r_text: str, tol: float, out: str | None, plot: bool) -> None:
    """Exact resistance to layer r with certified bounds, over an r-sweep."""
    profile = _load_profile(config)
    r_values = _parse_int_list(r_text, "--r")
    results = _sandwich_rows(profile, r_values, tol)
    header = ["r", "R_exact", "lower_bound_product", "shorted_bound", "flow_energy_upper"]
    rows = [
        [str(row["r"])] + [_fmt(row[k]) for k in header[1:]]
        for row in results
    ]
    _emit(_csv_text(header, rows), out)
    if out is not None and plot:
        from .plotting import save_resistance_figure

        save_resistance_figure(results, out)


@main.command("sandwich")
@config_option
@click.option("--r", "r_text", default="2,4,8", show_default=True, help="comma list of truncation layers")
@click.option("--tol", default=1e-10, show_default=True, help="solver residual tolerance")
@out_option
@plot_option
@_guarded
def sandwich_cmd(config: str, r_text: str, tol: float, out: str | None, plot: bool) -> None:
    """Run lower bounds, exact resistance, and the flow-energy upper bound
    over an r-sweep and check the ordering on every row."""
    profile = _load_profile(config)
    r_values = _parse_int_list(r_text, "--r")
    results = _sandwich_rows(profile, r_values, tol)
    for row in results:
        chain = (
            row["lower_bound_product"],
            row["shorted_bound"],
            row["R_exact"],
            row["flow_energy_upper"],
        )
        if not (chain[0] <= chain[1] <= chain[2] + tol and chain[2] <= chain[3] + tol):
            raise AssertionError(f"bound ordering violated at r={row['r']}: {chain}")
        row["ordering_ok"] = 1
    header = [
        "r",
        "lower_bound_product",
        "shorted_bound",
        "R_exact",
        "flow_energy_upper",
        "ordering_ok",
    ]
    rows = [
        [str(row["r"])]
        + [_fmt(row[k]) for k in header[1:-1]]
        + [str(row["ordering_ok"])]
        for row in results
    ]
    _emit(_csv_text(header, rows), out)
    if out is not None and plot:
        from .plotting import save_resistance_figure

        save_resistance_figure(results, out)


@main.command("flow")
@config_option
@click.option("--r", "r", default=8, show_default=True, help="sink layer")
@click.option(
    "--anchor",
    default=None,
    help="source vertex as comma-separated coordinates x1,..,xd,level (default origin)",
)
@out_option
@plot_option
@_guarded
def flow_cmd(config: str, r: int, anchor: str | None, out: str | None, plot: bool) -> None:
    """Build the anchored unit flow to layer r and emit its edge list."""
    profile = _load_profile(config)
    stairs = _stairs_for(profile, r)
    source = origin(profile.d) if anchor is None else tuple(_parse_int_list(anchor, "--anchor"))
    tube, base, carried = anchored_flow(stairs, source, r)
    series = math.fsum(layer_up_value(stairs.steps, n) for n in range(tube.top))
    energy = carried.energy
    residual = carried.kirchhoff_residual()
    rows = [
        [" ".join(map(str, tail)), " ".join(map(str, head)), _fmt(value)]
        for (tail, head), value in sorted(carried.edges.items())
    ]
    trailer = [
        f"energy={_fmt(energy)}",
        f"energy_ratio={_fmt(energy / series)}",
        f"kirchhoff_residual={_fmt(residual)}",
    ]
    _emit(_csv_text(["u", "v", "flow"], rows, trailer), out)
    if out is not None and plot:
        from .plotting import save_flow_figure

        bands: dict[int, float] = {}
        for (tail, _head), value in carried.edges.items():
            bands[tail[-1]] = bands.get(tail[-1], 0.0) + value * value
        save_flow_figure(sorted(bands.items()), out)


@main.command("green")
@config_option
@click.option("--r", "r", default=8, show_default=True, help="killing depth: walk dies entering layer r+1")
@click.option("--x", "x_text", default=None, help="diagonal vertex (default origin)")
@click.option("--tol", default=1e-10, show_default=True, help="solver residual tolerance")
@out_option
@_guarded
def green_cmd(config: str, r: int, x_text: str | None, tol: float, out: str | None) -> None:
    """Diagonal Green value of the killed walk, as JSON."""
    profile = _load_profile(config)
    stairs = _stairs_for(profile, r + 1)
    x = origin(profile.d) if x_text is None else tuple(_parse_int_list(x_text, "--x"))
    report = green_diagonal(stairs, r, x, tol=tol)
    payload = {
        "x": list(x),
        "r": r,
        "green": report.value,
        "residual": report.residual,
        "method": report.method,
        "iterations": report.iterations,
    }
    _emit(json.dumps(payload, indent=2) + "\n", out)


@main.command("simulate")
@config_option
@click.option("--mode", type=click.Choice(["green", "collide"]), required=True)
@click.option("--T", "horizon", default=1000, show_default=True, help="steps per trial")
@click.option("--trials", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--kill-r", "kill_r", default=None, type=int, help="kill layer (green mode)")
@out_option
@plot_option
@_guarded
def simulate_cmd(
    config: str,
    mode: str,
    horizon: int,
    trials: int,
    seed: int,
    kill_r: int | None,
    out: str | None,
    plot: bool,
) -> None:
    """Monte Carlo runs: killed-walk Green estimates or collision counts."""
    profile = _load_profile(config)
    cfg = WalkConfig(seed=seed, T=horizon, trials=trials, kill_r=kill_r)
    if mode == "green":
        if kill_r is None:
            raise click.UsageError("--kill-r is required in green mode")
        stairs = _stairs_for(profile, kill_r + 1)
        est = green_mc(stairs, origin(profile.d), kill_r, cfg)
        rows = [[str(t), _fmt(v)] for t, v in enumerate(est.per_trial)]
        rows.append(["mean", _fmt(est.mean)])
        rows.append(["stderr", _fmt(est.stderr)])
        rows.append(["exited", str(est.exited)])
        text = _csv_text(["trial", "green_estimate"], rows)
        values = [float(v) for v in est.per_trial]
        label = "green estimate"
    else:
        stats = collision_run(profile, cfg)
        rows = [[str(t), str(int(c))] for t, c in enumerate(stats.counts)]
        rows.append(["mean", _fmt(stats.mean)])
        rows.append(["stderr", _fmt(stats.stderr)])
        for k, frac in stats.fractions:
            rows.append([f"fraction_ge_{k}", _fmt(frac)])
        text = _csv_text(["trial", "collisions"], rows)
        values = [float(c) for c in stats.counts]
        label = "collisions per trial"
    _emit(text, out)
    if out is not None and plot:
        from .plotting import save_trials_figure

        save_trials_figure(values, label, out)


if __name__ == "__main__":
    main()
