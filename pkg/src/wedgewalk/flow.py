"""Explicit unit flows certifying resistance upper bounds.

Two constructions cooperate here.  First, a layered unit flow on the
staircase wedge: every vertex of the level-n staircase box sends the
same amount straight up, and when a staircase climbs, the arriving mass
is re-spread one coordinate at a time along lines of that level.
Second, a straightened tube around an arbitrary anchor vertex: two
monotone fences per coordinate enclose a tube of box slices whose widths
reproduce the staircase boxes level by level, so the layered flow
transports onto the tube edge for edge with its energy unchanged.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import AnchorOutsideTruncationError, NotInTubeError
from .profiles import Staircase, Vertex, layer_index

FlowEdges = dict[tuple[Vertex, Vertex], float]


def layer_up_value(steps: tuple[np.ndarray, ...], n: int) -> float:
    """Upward flow per vertex out of the level-n staircase box.

    Shared by the base flow and the tube transport so both produce the
    same float bit for bit.
    """
    return 1.0 / math.prod(int(arr[n]) + 1 for arr in steps)


@dataclass(frozen=True, eq=False)
class UnitFlow:
    """A unit flow on a finite graph, stored on positively oriented edges.

    Keys are (tail, head) with head = tail + e_axis; the value is the
    signed flow from tail to head.  Zero-flow edges are not stored.
    """

    edges: FlowEdges
    source: Vertex
    sink_level: int

    @cached_property
    def energy(self) -> float:
        return math.fsum(v * v for v in self.edges.values())

    def net_flux(self) -> dict[Vertex, float]:
        acc: dict[Vertex, list[float]] = {}
        for (tail, head), v in self.edges.items():
            acc.setdefault(tail, []).append(v)
            acc.setdefault(head, []).append(-v)
        return {vertex: math.fsum(parts) for vertex, parts in acc.items()}

    def kirchhoff_residual(self) -> float:
        """Worst conservation violation: interior vertices should balance,
        the source should emit exactly one unit."""
        worst = 0.0
        for vertex, net in self.net_flux().items():
            if vertex[-1] == self.sink_level:
                continue
            target = 1.0 if vertex == self.source else 0.0
            worst = max(worst, abs(net - target))
        return worst


def _box_ranges(steps: tuple[np.ndarray, ...], n: int) -> list[range]:
    return [range(int(arr[n]) + 1) for arr in steps]


def staircase_wedge_vertices(steps: tuple[np.ndarray, ...], top: int) -> list[Vertex]:
    """All box slices of the staircase wedge up to the given level."""
    out = []
    for n in range(top + 1):
        out.extend(xs + (n,) for xs in itertools.product(*_box_ranges(steps, n)))
    out.sort()
    return out


def layered_unit_flow(steps: tuple[np.ndarray, ...], top: int) -> UnitFlow:
    """Unit flow from the origin to the level-`top` box of the staircase wedge.

    Vertical edges out of level n each carry the reciprocal box size.
    When coordinate i climbs at level n, each line along i re-spreads its
    uniform mass one position wider; the edge from position j to j+1 then
    carries (j+1)/(old box size * (k+2)) with k the old line top.
    """
    if top < 1:
        raise ValueError(f"flow needs at least one level, got top={top}")
    d = len(steps)
    edges: FlowEdges = {}
    for n in range(top):
        value = layer_up_value(steps, n)
        for xs in itertools.product(*_box_ranges(steps, n)):
            edges[(xs + (n,), xs + (n + 1,))] = value
    for n in range(1, top):
        widths = [int(arr[n - 1]) + 1 for arr in steps]
        for i in range(d):
            if steps[i][n] == steps[i][n - 1]:
                continue
            k = widths[i] - 1
            mass = 1.0 / math.prod(widths)
            others = [
                range(widths[j]) if j != i else (0,) for j in range(d)
            ]
            for combo in itertools.product(*others):
                for j in range(k + 1):
                    tail = combo[:i] + (j,) + combo[i + 1 :] + (n,)
                    head = combo[:i] + (j + 1,) + combo[i + 1 :] + (n,)
                    edges[(tail, head)] = (j + 1) * mass / (k + 2)
            widths[i] += 1
    return UnitFlow(edges=edges, source=(0,) * d + (0,), sink_level=top)


@dataclass(frozen=True, eq=False)
class Tube:
    """A monotone tube of box slices around an anchor vertex.

    lower[i][n] and upper[i][n] fence coordinate i at relative level n
    (absolute level n + anchor level); their gap equals the staircase
    height at n, and the slices nest as n grows.
    """

    stairs: Staircase
    anchor: Vertex
    r: int
    lower: np.ndarray
    upper: np.ndarray

    @property
    def s(self) -> int:
        return self.anchor[-1]

    @property
    def top(self) -> int:
        return self.r - self.s

    @property
    def d(self) -> int:
        return self.stairs.d

    def contains(self, v: Vertex) -> bool:
        n = v[-1] - self.s
        if n < 0 or n > self.top:
            return False
        return all(self.lower[i][n] <= v[i] <= self.upper[i][n] for i in range(self.d))

    @cached_property
    def frozen_reference(self) -> np.ndarray:
        """Per coordinate and relative level, the fence that did not move
        on the last step (the smaller one if both held still)."""
        d, top = self.d, self.top
        ref = np.zeros((d, top + 1), dtype=np.int64)
        ref[:, 0] = self.anchor[:-1]
        for n in range(1, top + 1):
            for i in range(d):
                frozen = []
                if self.lower[i][n] == self.lower[i][n - 1]:
                    frozen.append(self.lower[i][n])
                if self.upper[i][n] == self.upper[i][n - 1]:
                    frozen.append(self.upper[i][n])
                if not frozen:
                    raise AssertionError(
                        f"both fences of coordinate {i} moved at relative level {n}"
                    )
                ref[i][n] = min(frozen)
        return ref

    def vertices(self) -> list[Vertex]:
        out = []
        for n in range(self.top + 1):
            ranges = [
                range(int(self.lower[i][n]), int(self.upper[i][n]) + 1)
                for i in range(self.d)
            ]
            out.extend(xs + (n + self.s,) for xs in itertools.product(*ranges))
        out.sort()
        return out

    def straighten(self, v: Vertex) -> Vertex:
        """Map a tube vertex onto the staircase wedge: distance from the
        frozen fence per coordinate, relative level last."""
        if not self.contains(v):
            raise NotInTubeError(f"{v} is outside the tube around {self.anchor}")
        n = v[-1] - self.s
        ref = self.frozen_reference
        return tuple(abs(v[i] - int(ref[i][n])) for i in range(self.d)) + (n,)

    def unstraighten(self, y: Vertex) -> Vertex:
        """Inverse of straighten, recovering the tube vertex."""
        n = y[-1]
        if n < 0 or n > self.top:
            raise NotInTubeError(f"relative level {n} outside [0, {self.top}]")
        ref = self.frozen_reference
        coords = []
        for i in range(self.d):
            lo, hi, anchor_side = int(self.lower[i][n]), int(self.upper[i][n]), int(ref[i][n])
            up = anchor_side + y[i]
            down = anchor_side - y[i]
            if lo <= down and up <= hi and up != down:
                raise AssertionError(
                    f"ambiguous preimage for {y} in coordinate {i}"
                )
            coord = up if up <= hi else down
            if not lo <= coord <= hi:
                raise NotInTubeError(f"{y} has no preimage in the tube")
            coords.append(coord)
        return tuple(coords) + (n + self.s,)


def derive_tube(stairs: Staircase, anchor: Vertex, r: int) -> Tube:
    """Grow the fences level by level from the anchor.

    While coordinate i's staircase rests, both fences rest.  When it
    climbs, the lower fence steps down if it can, otherwise the upper
    fence steps up.  The fences stay inside the wedge and below the
    level-r staircase heights, which is checked here exactly.
    """
    stairs.check_levels(r)
    if len(anchor) != stairs.d + 1:
        raise AnchorOutsideTruncationError(
            f"anchor {anchor} has wrong dimension for d={stairs.d}"
        )
    if layer_index(stairs, anchor) > r - 1:
        raise AnchorOutsideTruncationError(
            f"anchor {anchor} lies beyond layer {r - 1}"
        )
    d, s = stairs.d, anchor[-1]
    top = r - s
    lower = np.zeros((d, top + 1), dtype=np.int64)
    upper = np.zeros((d, top + 1), dtype=np.int64)
    lower[:, 0] = anchor[:-1]
    upper[:, 0] = anchor[:-1]
    for n in range(1, top + 1):
        for i in range(d):
            h_now, h_prev = stairs.steps[i][n], stairs.steps[i][n - 1]
            if h_now == h_prev:
                lower[i][n] = lower[i][n - 1]
                upper[i][n] = upper[i][n - 1]
            elif lower[i][n - 1] == 0:
                lower[i][n] = 0
                upper[i][n] = upper[i][n - 1] + 1
            else:
                lower[i][n] = lower[i][n - 1] - 1
                upper[i][n] = upper[i][n - 1]
    tube = Tube(stairs=stairs, anchor=anchor, r=r, lower=lower, upper=upper)
    verify_tube_properties(tube)
    return tube


def verify_tube_properties(tube: Tube) -> None:
    """Exact checks: unit fence steps, gap equal to the staircase height,
    and fences confined to the wedge and the level-r box."""
    stairs, d, top, s = tube.stairs, tube.d, tube.top, tube.s
    profile = stairs.profile
    for i in range(d):
        lo, hi = tube.lower[i], tube.upper[i]
        for n in range(top):
            if hi[n + 1] - hi[n] not in (0, 1) or lo[n + 1] - lo[n] not in (0, -1):
                raise AssertionError(f"fence {i} moved by more than one at level {n + 1}")
        for n in range(top + 1):
            if hi[n] - lo[n] != stairs.steps[i][n]:
                raise AssertionError(
                    f"fence gap {int(hi[n] - lo[n])} differs from staircase "
                    f"height {int(stairs.steps[i][n])} at relative level {n}"
                )
            cap = min(profile.functions[i].value(n + s), float(stairs.steps[i][tube.r]))
            if not 0 <= lo[n] <= hi[n] <= cap:
                raise AssertionError(
                    f"fences of coordinate {i} leave the wedge at relative level {n}"
                )


def verify_straightening(tube: Tube) -> None:
    """Check that straightening is a bijection onto the staircase wedge
    truncation which preserves same-level edges and down-steps."""
    stairs, top = tube.stairs, tube.top
    tube_verts = tube.vertices()
    target = set(staircase_wedge_vertices(stairs.steps, top))
    image = {}
    for v in tube_verts:
        y = tube.straighten(v)
        if y in image:
            raise AssertionError(f"straightening collides: {image[y]} and {v} -> {y}")
        if tube.unstraighten(y) != v:
            raise AssertionError(f"unstraighten(straighten({v})) != {v}")
        image[y] = v
    if set(image) != target:
        raise AssertionError("straightened tube differs from the staircase wedge")
    tube_set = set(tube_verts)
    for v in tube_verts:
        y = tube.straighten(v)
        # Same-level adjacency must survive in both directions.
        for i in range(tube.d):
            for delta in (1, -1):
                w = v[:i] + (v[i] + delta,) + v[i + 1 :]
                y_w = tube.straighten(w) if w in tube_set else None
                w_adjacent = w in tube_set
                image_adjacent = y_w is not None and sum(
                    abs(a - b) for a, b in zip(y, y_w)
                ) == 1
                if w_adjacent != image_adjacent:
                    raise AssertionError(f"edge {v}-{w} not preserved")
        # Down-step existence must match on both sides.
        down = v[:-1] + (v[-1] - 1,)
        y_down = y[:-1] + (y[-1] - 1,)
        if (down in tube_set) != (y_down in target):
            raise AssertionError(f"down-step mismatch at {v}")


def transport_flow(tube: Tube, base: UnitFlow) -> UnitFlow:
    """Carry the layered flow from the staircase wedge onto the tube.

    Same-level edges copy the value of their straightened image, with the
    sign flipped where straightening reverses the coordinate.  Vertical
    edges take the shared per-level value directly.
    """
    if base.sink_level != tube.top:
        raise ValueError(
            f"base flow reaches level {base.sink_level}, tube needs {tube.top}"
        )
    steps = tube.stairs.steps
    edges: FlowEdges = {}
    for v in tube.vertices():
        n = v[-1] - tube.s
        if n < tube.top:
            edges[(v, v[:-1] + (v[-1] + 1,))] = layer_up_value(steps, n)
        if n == 0:
            continue
        y = tube.straighten(v)
        for i in range(tube.d):
            w = v[:i] + (v[i] + 1,) + v[i + 1 :]
            if not tube.contains(w):
                continue
            y_w = tube.straighten(w)
            if y_w[i] == y[i] + 1:
                value = base.edges.get((y, y_w))
            else:
                value = base.edges.get((y_w, y))
                value = -value if value is not None else None
            if value is not None:
                edges[(v, w)] = value
    return UnitFlow(edges=edges, source=tube.anchor, sink_level=tube.r)


def anchored_flow(stairs: Staircase, anchor: Vertex, r: int) -> tuple[Tube, UnitFlow, UnitFlow]:
    """Tube, base flow, and transported flow for one anchor."""
    tube = derive_tube(stairs, anchor, r)
    base = layered_unit_flow(stairs.steps, tube.top)
    return tube, base, transport_flow(tube, base)


@dataclass(frozen=True)
class FlowEnergyBound:
    """Certified resistance upper bound with its series comparison."""

    energy: float
    series_sum: float
    ratio: float


def resistance_upper_bound(stairs: Staircase, r: int) -> FlowEnergyBound:
    """Energy of the layered flow out of the origin, truncated at layer r.

    The energy bounds the origin-to-layer-r resistance from above; the
    ratio against the box-reciprocal series is the empirically observed
    dimensional constant.
    """
    flow = layered_unit_flow(stairs.steps, r)
    series = math.fsum(layer_up_value(stairs.steps, n) for n in range(r))
    return FlowEnergyBound(energy=flow.energy, series_sum=series, ratio=flow.energy / series)
