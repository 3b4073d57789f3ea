"""Electrical network machinery on wedge truncations.

Unit conductances on nearest-neighbor edges.  Effective resistance from
the origin to layer r is computed by grounding that layer, injecting a
unit current at the origin, and reading the origin potential from the
reduced Laplacian system.  The same solve yields the diagonal Green
value (expected visits divided by degree) of the walk killed on leaving
the truncation, because interior vertices keep their full wedge degree
inside the truncation graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import DisconnectedError, OutsideTruncationError, SolverFailureError
from .geometry import (
    crossing_edge_counts,
    enumerate_truncation,
    origin,
    truncation_edges,
    wedge_degree,
)
from .profiles import Staircase, Vertex, box_reciprocal_terms, layer_index


@dataclass(frozen=True)
class SolveReport:
    """Outcome of one grounded-Laplacian solve."""

    value: float
    residual: float
    method: str
    iterations: int


@dataclass(frozen=True, eq=False)
class TruncationGraph:
    """Induced graph on the vertices of layers 0..r, with layer r as sink.

    Interior vertices (layers below r) keep their full wedge degree here,
    since a unit step moves the layer index by at most one.
    """

    stairs: Staircase
    r: int
    vertices: tuple[Vertex, ...]
    index: dict[Vertex, int]
    edge_tail: np.ndarray
    edge_head: np.ndarray
    layer_of: np.ndarray

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edge_tail)

    @cached_property
    def sink_mask(self) -> np.ndarray:
        return self.layer_of == self.r

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=np.int64)
        np.add.at(deg, self.edge_tail, 1)
        np.add.at(deg, self.edge_head, 1)
        return deg

    @cached_property
    def laplacian(self) -> sp.csr_matrix:
        n = self.n_vertices
        ones = np.ones(self.n_edges)
        adj = sp.coo_matrix(
            (
                np.concatenate([ones, ones]),
                (
                    np.concatenate([self.edge_tail, self.edge_head]),
                    np.concatenate([self.edge_head, self.edge_tail]),
                ),
            ),
            shape=(n, n),
        ).tocsr()
        return sp.diags(self.degrees.astype(float)) - adj


def build_truncation_graph(stairs: Staircase, r: int, validate: bool = True) -> TruncationGraph:
    if r < 1:
        raise ValueError(f"truncation radius must be >= 1, got {r}")
    vertices = tuple(enumerate_truncation(stairs, r, cross_check=validate))
    index = {v: k for k, v in enumerate(vertices)}
    pairs = truncation_edges(stairs.profile, list(vertices))
    tail = np.asarray([index[a] for a, _ in pairs], dtype=np.int64)
    head = np.asarray([index[b] for _, b in pairs], dtype=np.int64)
    layers = np.asarray([layer_index(stairs, v) for v in vertices], dtype=np.int64)
    graph = TruncationGraph(
        stairs=stairs,
        r=r,
        vertices=vertices,
        index=index,
        edge_tail=tail,
        edge_head=head,
        layer_of=layers,
    )
    if validate:
        deg = graph.degrees
        for k, v in enumerate(vertices):
            if layers[k] < r and deg[k] != wedge_degree(stairs.profile, v):
                raise AssertionError(
                    f"interior vertex {v} has truncated degree {deg[k]} "
                    f"but wedge degree {wedge_degree(stairs.profile, v)}"
                )
    return graph


def _solve_grounded(graph: TruncationGraph, source: int, tol: float) -> tuple[np.ndarray, SolveReport]:
    """Potentials for unit current at `source` with the sink layer grounded.

    Returns potentials on the full vertex set (zeros on the sink) and a
    report whose value is the source potential.
    """
    interior = ~graph.sink_mask
    if not graph.sink_mask.any():
        raise DisconnectedError(f"truncation at r={graph.r} has no sink layer")
    if not interior[source]:
        raise OutsideTruncationError("source vertex sits on the grounded layer")
    keep = np.flatnonzero(interior)
    reduced = graph.laplacian[keep][:, keep].tocsc()
    n = len(keep)
    b = np.zeros(n)
    pos = int(np.searchsorted(keep, source))
    b[pos] = 1.0

    diag = reduced.diagonal()
    if (diag <= 0).any():
        raise DisconnectedError("isolated vertex in the interior")
    precond = spla.LinearOperator((n, n), matvec=lambda x: x / diag)
    iterations = 0

    def count(_xk: np.ndarray) -> None:
        nonlocal iterations
        iterations += 1

    phi, info = spla.cg(
        reduced, b, rtol=1e-13, atol=0.0, maxiter=20 * n + 200, M=precond, callback=count
    )
    method = "cg"
    residual = float(np.abs(reduced @ phi - b).max()) if info == 0 else math.inf
    if info != 0 or residual > tol:
        phi = spla.splu(reduced).solve(b)
        method = "splu"
        residual = float(np.abs(reduced @ phi - b).max())
        if residual > tol:
            raise SolverFailureError(
                f"residual {residual:.3e} exceeds tolerance {tol:.3e} "
                f"after direct factorization (n={n})"
            )
    full = np.zeros(graph.n_vertices)
    full[keep] = phi
    report = SolveReport(
        value=float(phi[pos]), residual=residual, method=method, iterations=iterations
    )
    return full, report


def effective_resistance(stairs: Staircase, r: int, tol: float = 1e-10) -> SolveReport:
    """Resistance from the origin to layer r, exact up to solver tolerance."""
    graph = build_truncation_graph(stairs, r)
    _, report = _solve_grounded(graph, graph.index[origin(stairs.d)], tol)
    return report


def potentials(graph: TruncationGraph, source: Vertex, tol: float = 1e-10) -> np.ndarray:
    """Grounded potentials for a unit current injected at `source`."""
    if source not in graph.index:
        raise OutsideTruncationError(f"{source} is not in the truncation at r={graph.r}")
    full, _ = _solve_grounded(graph, graph.index[source], tol)
    return full


def green_diagonal(
    stairs: Staircase, r: int, x: Vertex | None = None, tol: float = 1e-10
) -> SolveReport:
    """Diagonal Green value at x for the walk killed on leaving layers 0..r.

    Killing happens on arrival in layer r+1, so the underlying solve
    grounds that layer; the value equals the resistance from x to layer
    r+1 because interior degrees match wedge degrees.
    """
    if x is None:
        x = origin(stairs.d)
    graph = build_truncation_graph(stairs, r + 1)
    if x not in graph.index or layer_index(stairs, x) > r:
        raise OutsideTruncationError(f"{x} is not within layers 0..{r}")
    _, report = _solve_grounded(graph, graph.index[x], tol)
    return report


def resistance_lower_bound(stairs: Staircase, r: int) -> float:
    """Closed-form lower bound: the box-reciprocal series over layers
    below r, divided by 2(d+1)^2."""
    terms = box_reciprocal_terms(stairs, r)
    return math.fsum(terms.tolist()) / (2.0 * (stairs.d + 1) ** 2)


def shorted_lower_bound(stairs: Staircase, r: int) -> float:
    """Sharper lower bound from shorting each layer to a point.

    The edges between consecutive layers are disjoint cutsets, so the
    reciprocal counts sum to a resistance lower bound.
    """
    counts = crossing_edge_counts(stairs, r)
    if (counts == 0).any():
        raise DisconnectedError(f"no edges between some consecutive layers below r={r}")
    return math.fsum((1.0 / counts).tolist())
