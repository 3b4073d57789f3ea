"""Figure rendering for CLI report paths.

Each helper takes already-computed rows, draws one matplotlib figure,
and writes it next to the delimited output file.  Rendering is kept out
of the numeric modules so library users never pay for a matplotlib
import unless they ask for pictures.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)


def figure_path(out_path: str | Path) -> Path:
    return Path(out_path).with_suffix(".png")


def _finish(fig: plt.Figure, out_path: str | Path) -> Path:
    target = figure_path(out_path)
    fig.tight_layout()
    fig.savefig(target, dpi=120)
    plt.close(fig)
    return target


def save_partition_figure(rows: list[dict], out_path: str | Path) -> Path:
    """Layer sizes against the proven sandwich, log scale."""
    n = [row["n"] for row in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(n, [row["layer_size"] for row in rows], "o-", label="layer size", ms=3)
    ax.plot(n, [row["lower_bound"] for row in rows], "--", label="box size (lower)")
    ax.plot(n, [row["upper_bound"] for row in rows], "--", label="(d+1) x box size (upper)")
    ax.set_xlabel("layer n")
    ax.set_ylabel("vertices")
    ax.set_yscale("log")
    ax.legend()
    ax.set_title("layer sizes and proven bounds")
    return _finish(fig, out_path)


def save_resistance_figure(rows: list[dict], out_path: str | Path) -> Path:
    """Lower bounds, exact resistance, and flow-energy upper bound over r."""
    r = [row["r"] for row in rows]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(r, [row["lower_bound_product"] for row in rows], "v--", label="series lower bound", ms=4)
    ax.plot(r, [row["shorted_bound"] for row in rows], "^--", label="shorted-layer bound", ms=4)
    ax.plot(r, [row["R_exact"] for row in rows], "o-", label="exact resistance", ms=4)
    ax.plot(r, [row["flow_energy_upper"] for row in rows], "s--", label="flow-energy upper bound", ms=4)
    ax.set_xlabel("truncation layer r")
    ax.set_ylabel("resistance")
    ax.legend()
    ax.set_title("resistance sandwich")
    return _finish(fig, out_path)


def save_classify_figure(sums: list[tuple[int, float]], verdict: str, out_path: str | Path) -> Path:
    """Partial sums of the recurrence series on a log-N axis."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot([n for n, _ in sums], [s for _, s in sums], "o-", ms=4)
    ax.set_xscale("log")
    ax.set_xlabel("terms N")
    ax.set_ylabel("partial sum")
    ax.set_title(f"recurrence series growth ({verdict})")
    return _finish(fig, out_path)


def save_flow_figure(level_energy: list[tuple[int, float]], out_path: str | Path) -> Path:
    """Flow energy attributed to each level band."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.bar([n for n, _ in level_energy], [e for _, e in level_energy])
    ax.set_xlabel("level")
    ax.set_ylabel("energy in band")
    ax.set_title("unit-flow energy by level")
    return _finish(fig, out_path)


def save_trials_figure(values: list[float], label: str, out_path: str | Path) -> Path:
    """Histogram of per-trial Monte Carlo values."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    bins = min(30, max(5, len(set(values))))
    ax.hist(values, bins=bins)
    ax.set_xlabel(label)
    ax.set_ylabel("trials")
    ax.set_title(f"distribution over {len(values)} trials")
    return _finish(fig, out_path)
