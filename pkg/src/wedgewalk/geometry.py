"""Wedge vertex sets, the layer partition, and truncations.

Vertices are integer tuples (x_1, ..., x_d, level).  The wedge holds
those with level >= 0 and 0 <= x_i <= f_i(level); nearest-neighbor edges
carry unit conductance.  Layers partition the wedge: vertex x belongs to
layer n exactly when n is the larger of its level and the first levels
at which each staircase reaches its coordinates.  Layers move by at most
one step along any edge, which is what makes them usable as nested
cutsets around the origin.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NotInWedgeError
from .profiles import (
    Profile,
    Staircase,
    Vertex,
    box_sizes,
    first_reach_level,
    layer_index,
)


def origin(d: int) -> Vertex:
    return (0,) * (d + 1)


def in_wedge(profile: Profile, v: Vertex) -> bool:
    if len(v) != profile.d + 1:
        return False
    level = v[-1]
    if level < 0:
        return False
    for i, f in enumerate(profile.functions):
        if v[i] < 0 or v[i] > f.value(level):
            return False
    return True


def neighbors(profile: Profile, v: Vertex) -> list[Vertex]:
    """Wedge neighbors of v, in +-e_1, ..., +-e_(d+1) order."""
    out = []
    for axis in range(profile.d + 1):
        for delta in (1, -1):
            w = list(v)
            w[axis] += delta
            w = tuple(w)
            if in_wedge(profile, w):
                out.append(w)
    return out


def wedge_degree(profile: Profile, v: Vertex) -> int:
    if not in_wedge(profile, v):
        raise NotInWedgeError(f"{v} violates the profile bounds")
    return len(neighbors(profile, v))


def _coordinate_cap(bound: float) -> int:
    """Largest admissible integer coordinate under a real (or +inf) bound."""
    if math.isinf(bound):
        raise OverflowError("cap requested for an unbounded coordinate")
    return int(math.floor(bound))


def axial_box(stairs: Staircase, n: int) -> list[Vertex]:
    """The level-n staircase box: coordinates up to h_i(n), level n."""
    stairs.check_levels(n)
    ranges = [range(int(arr[n]) + 1) for arr in stairs.steps]
    return [xs + (n,) for xs in itertools.product(*ranges)]


def layer_piece(stairs: Staircase, i: int, n: int) -> list[Vertex]:
    """Piece i of layer n, for 0 <= i <= d.

    Piece d is the level-n staircase box.  Piece i < d is nonempty only
    when staircase i climbs at n; it is then the wedge slab of vertices
    with x_i pinned at h_i(n), the other coordinates below their
    staircases, and level at most n.
    """
    stairs.check_levels(n)
    d = stairs.d
    if not 0 <= i <= d:
        raise ValueError(f"piece index must be in [0, {d}], got {i}")
    if n == 0:
        return [origin(d)]
    if i == d:
        return axial_box(stairs, n)
    arr = stairs.steps[i]
    if arr[n] == arr[n - 1]:
        return []
    pinned = int(arr[n])
    profile = stairs.profile
    out = []
    for level in range(n + 1):
        # The slab lives inside the wedge, so profile bounds trim it too.
        ranges = []
        empty = False
        for j, f in enumerate(profile.functions):
            if j == i:
                if pinned > f.value(level):
                    empty = True
                    break
                ranges.append((pinned,))
            else:
                cap = _coordinate_cap(min(float(stairs.steps[j][n]), f.value(level)))
                ranges.append(range(cap + 1))
        if empty:
            continue
        out.extend(xs + (level,) for xs in itertools.product(*ranges))
    return out


@dataclass(frozen=True)
class Layer:
    """All vertices assigned to partition index n, sorted."""

    index: int
    vertices: tuple[Vertex, ...]

    def __len__(self) -> int:
        return len(self.vertices)


def layer(stairs: Staircase, n: int) -> Layer:
    """Assemble layer n as the union of its pieces.

    Cross-checks each collected vertex against the direct index formula;
    the two characterizations must agree.
    """
    seen = set()
    for i in range(stairs.d + 1):
        seen.update(layer_piece(stairs, i, n))
    for v in seen:
        got = layer_index(stairs, v)
        if got != n:
            raise AssertionError(
                f"partition mismatch at {v}: piece union says layer {n}, "
                f"index formula says {got}"
            )
    return Layer(index=n, vertices=tuple(sorted(seen)))


def layer_counts(stairs: Staircase, count: int) -> np.ndarray:
    """Sizes |layer n| for n = 0 .. count-1."""
    return np.asarray([len(layer(stairs, n)) for n in range(count)], dtype=np.int64)


def layer_size_bounds(stairs: Staircase, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Proven sandwich for layer sizes: box size below, (d+1) x box size above."""
    sizes = box_sizes(stairs, count)
    return sizes, (stairs.d + 1) * sizes


def enumerate_truncation(stairs: Staircase, r: int, cross_check: bool = True) -> list[Vertex]:
    """All vertices with layer index at most r, sorted.

    Built two ways when cross_check is set: directly from the membership
    predicate (level <= r and every coordinate already reached by level
    r), and as the union of layers 0..r.  The two routes must agree.
    """
    stairs.check_levels(r)
    profile = stairs.profile
    direct = []
    for level in range(r + 1):
        ranges = []
        for i, f in enumerate(profile.functions):
            cap = min(f.value(level), float(stairs.steps[i][r]))
            ranges.append(range(_coordinate_cap(cap) + 1))
        direct.extend(xs + (level,) for xs in itertools.product(*ranges))
    direct.sort()
    if cross_check:
        union = set()
        for n in range(r + 1):
            union.update(layer(stairs, n).vertices)
        if union != set(direct):
            raise AssertionError(
                f"truncation mismatch at r={r}: box route gives {len(direct)} "
                f"vertices, layer-union route gives {len(union)}"
            )
    return direct


def truncation_edges(profile: Profile, vertices: list[Vertex]) -> list[tuple[Vertex, Vertex]]:
    """Edges of the induced subgraph on the given wedge vertices.

    Each unordered pair is listed once, smaller endpoint first.
    """
    vset = set(vertices)
    edges = []
    for v in vertices:
        for axis in range(profile.d + 1):
            w = list(v)
            w[axis] += 1
            w = tuple(w)
            if w in vset:
                edges.append((v, w))
    edges.sort()
    return edges


def crossing_edge_counts(stairs: Staircase, r: int) -> np.ndarray:
    """Number of edges joining layer n to layer n+1, for n = 0 .. r-1.

    Each such edge family is a cutset between the origin and layer r, so
    the reciprocals sum to a resistance lower bound.
    """
    vertices = enumerate_truncation(stairs, r)
    idx = {v: layer_index(stairs, v) for v in vertices}
    counts = np.zeros(r, dtype=np.int64)
    for v, w in truncation_edges(stairs.profile, vertices):
        a, b = idx[v], idx[w]
        if a > b:
            a, b = b, a
        if b == a + 1 and a < r:
            counts[a] += 1
        elif b > a + 1:
            raise AssertionError(f"edge {v}-{w} skips from layer {a} to {b}")
    return counts
