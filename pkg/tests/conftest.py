"""Shared fixtures: reference wedges, seeded random profiles, and a dense
linear-algebra oracle independent of the sparse solver path."""

from __future__ import annotations

import numpy as np
import pytest

from wedgewalk import (
    Profile,
    Staircase,
    build_truncation_graph,
    derive_staircase,
    origin,
    validate_profile,
)

# The reference wedges used across the suite.  Horizons are generous so a
# single staircase serves every radius a test asks for.
STANDARD_DOCS: dict[str, dict] = {
    "halfline": {"d": 1, "profiles": [{"type": "const", "c": 0}]},
    "triangle": {"d": 1, "profiles": [{"type": "linear", "a": 1, "b": 0}]},
    "halfslope": {"d": 1, "profiles": [{"type": "linear", "a": 0.5, "b": 0}]},
    "corridor": {"d": 1, "profiles": [{"type": "const", "c": 5}]},
    "cone2": {
        "d": 2,
        "profiles": [{"type": "linear", "a": 1, "b": 0}, {"type": "linear", "a": 1, "b": 0}],
    },
    "mixed2": {"d": 2, "profiles": [{"type": "exp", "base": 2}, {"type": "log"}]},
    "cone3": {"d": 3, "profiles": [{"type": "linear", "a": 1, "b": 0}] * 3},
}


def standard_profile(name: str) -> Profile:
    return validate_profile(STANDARD_DOCS[name])


def standard_wedge(name: str, levels: int) -> tuple[Profile, Staircase]:
    profile = standard_profile(name)
    return profile, derive_staircase(profile, levels)


@pytest.fixture
def halfline():
    return standard_wedge("halfline", 220)


@pytest.fixture
def triangle():
    return standard_wedge("triangle", 40)


@pytest.fixture
def cone2():
    return standard_wedge("cone2", 40)


def random_profile_doc(rng: np.random.Generator, d: int) -> dict:
    """A seeded random profile document covering every form.

    Tables get 14 entries so staircases reach level 13, enough for the
    r <= 12 sweeps in the partition suite.
    """
    entries = []
    for _ in range(d):
        kind = rng.choice(
            ["table", "linear", "power", "exp", "log", "const", "inf"]
        )
        if kind == "table":
            increments = rng.choice([0.0, 0.5, 1.0, 2.0], size=14)
            values = [float(v) for v in np.cumsum(increments)]
            if rng.random() < 0.3:
                cut = int(rng.integers(8, 14))
                values = values[:cut] + ["inf"] * (14 - cut)
            entries.append({"type": "table", "values": values})
        elif kind == "linear":
            entries.append(
                {
                    "type": "linear",
                    "a": float(rng.choice([0.0, 0.5, 1.0, 2.0])),
                    "b": float(rng.integers(0, 4)),
                }
            )
        elif kind == "power":
            entries.append({"type": "power", "a": float(rng.choice([0.0, 0.5, 1.0, 1.5]))})
        elif kind == "exp":
            entries.append({"type": "exp", "base": float(rng.choice([1.0, 1.5, 2.0]))})
        elif kind == "const":
            entries.append({"type": "const", "c": float(rng.integers(0, 5))})
        else:
            entries.append({"type": kind})
    return {"d": d, "profiles": entries}


def dense_resistance(stairs: Staircase, r: int, source=None) -> float:
    """Oracle: effective resistance via a dense LAPACK solve.

    Same grounded-Laplacian formulation, entirely different numerical
    route from the sparse CG/LU production path.
    """
    graph = build_truncation_graph(stairs, r)
    if source is None:
        source = origin(stairs.d)
    keep = np.flatnonzero(~graph.sink_mask)
    reduced = graph.laplacian.toarray()[np.ix_(keep, keep)]
    rhs = np.zeros(len(keep))
    pos = int(np.searchsorted(keep, graph.index[source]))
    rhs[pos] = 1.0
    phi = np.linalg.solve(reduced, rhs)
    return float(phi[pos])
