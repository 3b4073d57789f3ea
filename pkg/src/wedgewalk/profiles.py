"""Profile functions and their integer staircase approximations.

A wedge in Z^(d+1) is cut out by d weakly increasing profile functions
f_i mapping a level n >= 0 to a bound in [0, +inf]: the wedge contains
(x_1, ..., x_d, n) iff 0 <= x_i <= f_i(n) for every i.  Each profile is
shadowed by an integer staircase h_i that starts at 0 and climbs by at
most one unit per level while staying below f_i.  The staircases drive
everything downstream: the layer partition, the resistance bounds, and
the recurrence series.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    HorizonExceededError,
    NegativeValueError,
    NonMonotoneError,
    SchemaError,
    ZeroDimensionError,
)

Vertex = tuple[int, ...]

#: Largest float exponent usable before pow overflows.
_MAX_FLOAT = sys.float_info.max


def _calibrate_cutoff(grow: Callable[[int], float], estimate: int) -> int:
    """Largest n at which `grow(n)` still evaluates without overflowing.

    The analytic estimate can land one step past the edge (Python pow
    raises instead of returning inf), so walk down until it evaluates.
    """
    n = max(estimate, 0)
    while n > 0:
        try:
            grow(n)
            return n
        except OverflowError:
            n -= 1
    return n

PARAMETRIC_KINDS = ("linear", "power", "exp", "log", "const", "inf")

PROFILE_SCHEMA_HINT = (
    '{"d": <int>=1>, "profiles": [<d entries>, each one of '
    '{"type": "table", "values": [num|"inf", ...]} | '
    '{"type": "linear", "a": num, "b": num} | {"type": "power", "a": num} | '
    '{"type": "exp", "base": num} | {"type": "log"} | '
    '{"type": "const", "c": num} | {"type": "inf"}]}'
)


@dataclass(frozen=True)
class ProfileFunction:
    """A single coordinate bound, tabulated or parametric.

    Parameter use per kind: const -> a is the constant; linear -> a*n + b;
    power -> n**a; exp -> a**n; log and inf take no parameters; table
    stores explicit values (math.inf allowed).
    """

    kind: str
    a: float = 0.0
    b: float = 0.0
    table: tuple[float, ...] | None = None

    @property
    def horizon(self) -> int | None:
        """Largest evaluable level, or None when unbounded."""
        if self.kind == "table":
            return len(self.table) - 1
        return None

    @property
    def bounded(self) -> bool:
        """True when the form guarantees sup f < inf on syntactic grounds.

        Tables are never considered bounded: they end, they do not promise
        anything beyond their horizon.
        """
        if self.kind == "const":
            return True
        if self.kind == "linear":
            return self.a == 0
        if self.kind == "power":
            return self.a == 0
        if self.kind == "exp":
            return self.a == 1
        return False

    def value(self, n: int) -> float:
        if n < 0:
            raise ValueError(f"level must be nonnegative, got {n}")
        return self.scalar()(n)

    def scalar(self) -> Callable[[int], float]:
        """A fast scalar evaluator, overflow-safe (saturates to +inf)."""
        kind = self.kind
        if kind == "table":
            table = self.table
            top = len(table) - 1

            def eval_table(n: int, _t=table, _top=top) -> float:
                if n > _top:
                    raise HorizonExceededError(
                        f"tabulated profile has {_top + 1} entries, level {n} requested"
                    )
                return _t[n]

            return eval_table
        if kind == "const":
            return lambda n, _c=self.a: _c
        if kind == "linear":
            return lambda n, _a=self.a, _b=self.b: _a * n + _b
        if kind == "power":
            a = self.a
            if a == 0:
                return lambda n: 1.0
            # log-space threshold: n**a overflows once a*ln(n) passes ln(max)
            log_cutoff = math.log(_MAX_FLOAT) / a
            if log_cutoff >= 60 * math.log(2):
                cutoff = 1 << 60  # true edge beyond any reachable level
            else:
                cutoff = _calibrate_cutoff(
                    lambda n, _a=a: float(n) ** _a, int(math.exp(log_cutoff))
                )
            return lambda n, _a=a, _cut=cutoff: float(n) ** _a if n <= _cut else math.inf
        if kind == "exp":
            base = self.a
            if base == 1:
                return lambda n: 1.0
            cutoff = _calibrate_cutoff(
                lambda n, _b=base: _b**n, int(math.log(_MAX_FLOAT) / math.log(base))
            )
            return lambda n, _b=base, _cut=cutoff: _b**n if n <= _cut else math.inf
        if kind == "log":
            return lambda n: math.log(n + 1)
        if kind == "inf":
            return lambda n: math.inf
        raise AssertionError(f"unknown profile kind {kind!r}")

    def values(self, levels: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over an integer level array."""
        levels = np.asarray(levels)
        if levels.size and levels.min() < 0:
            raise ValueError("levels must be nonnegative")
        kind = self.kind
        if kind == "table":
            top = len(self.table) - 1
            if levels.size and levels.max() > top:
                raise HorizonExceededError(
                    f"tabulated profile has {top + 1} entries, "
                    f"level {int(levels.max())} requested"
                )
            return np.asarray(self.table, dtype=float)[levels]
        if kind == "const":
            return np.full(levels.shape, float(self.a))
        if kind == "linear":
            return self.a * levels.astype(float) + self.b
        if kind == "power":
            with np.errstate(over="ignore"):
                return np.power(levels.astype(float), self.a)
        if kind == "exp":
            with np.errstate(over="ignore"):
                return np.power(float(self.a), levels.astype(float))
        if kind == "log":
            return np.log(levels.astype(float) + 1.0)
        if kind == "inf":
            return np.full(levels.shape, math.inf)
        raise AssertionError(f"unknown profile kind {kind!r}")

    def describe(self) -> str:
        if self.kind == "table":
            return f"table[{len(self.table)}]"
        if self.kind == "const":
            return f"const {self.a:g}"
        if self.kind == "linear":
            return f"{self.a:g}*n+{self.b:g}"
        if self.kind == "power":
            return f"n^{self.a:g}"
        if self.kind == "exp":
            return f"{self.a:g}^n"
        return self.kind


@dataclass(frozen=True)
class Profile:
    """The d coordinate bounds defining a wedge."""

    functions: tuple[ProfileFunction, ...]

    @property
    def d(self) -> int:
        return len(self.functions)

    @property
    def horizon(self) -> int | None:
        """Largest level at which every coordinate is evaluable."""
        tops = [f.horizon for f in self.functions if f.horizon is not None]
        return min(tops) if tops else None

    def value(self, i: int, n: int) -> float:
        return self.functions[i].value(n)

    def describe(self) -> str:
        return ", ".join(f.describe() for f in self.functions)


def _parse_table(values: Sequence) -> ProfileFunction:
    if not isinstance(values, (list, tuple)) or not values:
        raise SchemaError("table values must be a nonempty list")
    parsed = []
    for v in values:
        if v == "inf":
            parsed.append(math.inf)
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            parsed.append(float(v))
        else:
            raise SchemaError(f"table entry {v!r} is not a number or 'inf'")
    for k, v in enumerate(parsed):
        if v < 0:
            raise NegativeValueError(f"table entry {k} is negative ({v})")
    for k in range(len(parsed) - 1):
        if parsed[k + 1] < parsed[k]:
            raise NonMonotoneError(
                f"table decreases between entries {k} and {k + 1} "
                f"({parsed[k]} -> {parsed[k + 1]})"
            )
    return ProfileFunction(kind="table", table=tuple(parsed))


def _require_number(raw: dict, key: str, kind: str) -> float:
    if key not in raw:
        raise SchemaError(f"profile of type {kind!r} needs parameter {key!r}")
    v = raw[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise SchemaError(f"parameter {key!r} of {kind!r} must be a number")
    return float(v)


def _parse_function(raw: dict) -> ProfileFunction:
    if not isinstance(raw, dict) or "type" not in raw:
        raise SchemaError("each profile entry must be an object with a 'type' key")
    kind = raw["type"]
    if kind == "table":
        if "values" not in raw:
            raise SchemaError("table profile needs a 'values' list")
        return _parse_table(raw["values"])
    if kind == "linear":
        a = _require_number(raw, "a", kind)
        b = _require_number(raw, "b", kind)
        if a < 0:
            raise NonMonotoneError(f"linear slope must be >= 0, got {a}")
        if b < 0:
            raise NegativeValueError(f"linear intercept must be >= 0, got {b}")
        return ProfileFunction(kind="linear", a=a, b=b)
    if kind == "power":
        a = _require_number(raw, "a", kind)
        if a < 0:
            raise NonMonotoneError(f"power exponent must be >= 0, got {a}")
        return ProfileFunction(kind="power", a=a)
    if kind == "exp":
        base = _require_number(raw, "base", kind)
        if base < 1:
            raise NonMonotoneError(f"exp base must be >= 1, got {base}")
        return ProfileFunction(kind="exp", a=base)
    if kind == "log":
        return ProfileFunction(kind="log")
    if kind == "const":
        c = _require_number(raw, "c", kind)
        if c < 0:
            raise NegativeValueError(f"constant must be >= 0, got {c}")
        return ProfileFunction(kind="const", a=c)
    if kind == "inf":
        return ProfileFunction(kind="inf")
    raise SchemaError(f"unknown profile type {kind!r}")


def validate_profile(raw: dict) -> Profile:
    """Parse and validate a profile document.

    Raises SchemaError for structural problems, ZeroDimensionError /
    NonMonotoneError / NegativeValueError for semantic ones.
    """
    if not isinstance(raw, dict):
        raise SchemaError("profile document must be a JSON object")
    if "d" not in raw or "profiles" not in raw:
        raise SchemaError("profile document needs keys 'd' and 'profiles'")
    d = raw["d"]
    if not isinstance(d, int) or isinstance(d, bool):
        raise SchemaError("'d' must be an integer")
    if d == 0:
        raise ZeroDimensionError("profile must constrain at least one coordinate")
    if d < 0:
        raise SchemaError(f"'d' must be positive, got {d}")
    entries = raw["profiles"]
    if not isinstance(entries, list) or len(entries) != d:
        raise SchemaError(f"'profiles' must be a list of exactly d={d} entries")
    return Profile(functions=tuple(_parse_function(e) for e in entries))


@dataclass(frozen=True)
class Staircase:
    """Integer staircases shadowing a profile up to a finite horizon.

    steps[i][n] is the height of coordinate i's staircase at level n.
    Each staircase starts at 0, moves up by 0 or 1 per level, and never
    exceeds its profile function.
    """

    profile: Profile
    levels: int
    steps: tuple[np.ndarray, ...]

    @property
    def d(self) -> int:
        return len(self.steps)

    def check_levels(self, needed: int) -> None:
        if needed > self.levels:
            raise HorizonExceededError(
                f"staircase derived to level {self.levels}, level {needed} requested"
            )


def derive_staircase(profile: Profile, levels: int) -> Staircase:
    """Run the staircase recursion: climb one unit whenever the profile allows.

    At each level n >= 1 the staircase climbs iff h(n-1) + 1 <= f(n); the
    comparison is the raw integer-versus-real one, no flooring.
    """
    if levels < 0:
        raise ValueError(f"levels must be >= 0, got {levels}")
    top = profile.horizon
    if top is not None and levels > top:
        raise HorizonExceededError(
            f"profile tabulated to level {top}, staircase to {levels} requested"
        )
    steps = []
    for f in profile.functions:
        if f.kind == "inf":
            steps.append(np.arange(levels + 1, dtype=np.int64))
            continue
        fn = f.scalar()
        out = [0] * (levels + 1)
        cur = 0
        for n in range(1, levels + 1):
            if cur + 1 <= fn(n):
                cur += 1
            out[n] = cur
        steps.append(np.asarray(out, dtype=np.int64))
    return Staircase(profile=profile, levels=levels, steps=tuple(steps))


def first_reach_level(stairs: Staircase, i: int, target: int) -> int:
    """Smallest level m with steps[i][m] >= target.

    Because the staircase climbs in unit steps, the value at the returned
    level equals target exactly.
    """
    if target <= 0:
        return 0
    arr = stairs.steps[i]
    if target > arr[-1]:
        raise HorizonExceededError(
            f"coordinate {i} staircase tops out at {int(arr[-1])}, "
            f"target {target} unreachable within horizon {stairs.levels}"
        )
    return int(np.searchsorted(arr, target, side="left"))


def layer_index(stairs: Staircase, v: Vertex) -> int:
    """The unique partition layer containing v: the max of its level and
    the first-reach levels of its coordinates."""
    level = v[-1]
    if level < 0:
        raise ValueError(f"vertex level must be nonnegative, got {level}")
    u = level
    for i in range(stairs.d):
        m = first_reach_level(stairs, i, v[i])
        if m > u:
            u = m
    return u


def layer_index_array(stairs: Staircase, positions: np.ndarray) -> np.ndarray:
    """Vectorized layer_index over an (m, d+1) array of vertices.

    Coordinates beyond the staircase top map past the horizon
    (levels + 1), so callers can detect exits without exceptions.
    """
    u = positions[:, -1].astype(np.int64).copy()
    for i in range(stairs.d):
        reach = np.searchsorted(stairs.steps[i], positions[:, i], side="left")
        np.maximum(u, reach, out=u)
    return u


def box_sizes(stairs: Staircase, count: int) -> np.ndarray:
    """Integer sizes prod_i (h_i(n) + 1) of the level-n staircase boxes,
    for n = 0 .. count-1."""
    stairs.check_levels(count - 1)
    sizes = np.ones(count, dtype=np.int64)
    for arr in stairs.steps:
        sizes *= arr[:count] + 1
    return sizes


def box_reciprocal_terms(stairs: Staircase, count: int) -> np.ndarray:
    """The series terms 1 / prod_i (h_i(n) + 1) for n = 0 .. count-1."""
    stairs.check_levels(count - 1)
    # Accumulate in float: int64 box sizes overflow for deep, wide wedges.
    terms = np.ones(count, dtype=np.float64)
    for arr in stairs.steps:
        terms /= arr[:count] + 1.0
    return terms
