"""Unit flows, tubes, and the straightening bijection."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import STANDARD_DOCS, random_profile_doc, standard_wedge
from wedgewalk import (
    AnchorOutsideTruncationError,
    NotInTubeError,
    anchored_flow,
    build_truncation_graph,
    derive_staircase,
    enumerate_truncation,
    layer_up_value,
    layered_unit_flow,
    origin,
    potentials,
    resistance_upper_bound,
    staircase_wedge_vertices,
    transport_flow,
    derive_tube,
    validate_profile,
    verify_straightening,
)


def test_halfline_flow_is_all_vertical(halfline):
    _, stairs = halfline
    flow = layered_unit_flow(stairs.steps, 4)
    assert flow.edges == {
        ((0, n), (0, n + 1)): 1.0 for n in range(4)
    }
    assert flow.energy == 4.0
    assert flow.kirchhoff_residual() == 0.0


def test_triangle_flow_golden(triangle):
    _, stairs = triangle
    flow = layered_unit_flow(stairs.steps, 2)
    assert flow.edges[((0, 0), (0, 1))] == 1.0
    assert flow.edges[((0, 1), (0, 2))] == 0.5
    assert flow.edges[((1, 1), (1, 2))] == 0.5
    assert flow.edges[((0, 1), (1, 1))] == 0.5
    assert len(flow.edges) == 4
    assert flow.energy == 1.0 + 3 * 0.25
    # level-2 spread from the worked example: 1/6 and 1/3 along the line
    flow3 = layered_unit_flow(stairs.steps, 3)
    assert flow3.edges[((0, 2), (1, 2))] == pytest.approx(1 / 6)
    assert flow3.edges[((1, 2), (2, 2))] == pytest.approx(1 / 3)


def test_vertical_values_and_level_flux(cone2):
    _, stairs = cone2
    top = 6
    flow = layered_unit_flow(stairs.steps, top)
    for n in range(top):
        value = layer_up_value(stairs.steps, n)
        ups = [
            w for (u, v), w in flow.edges.items()
            if u[-1] == n and v[-1] == n + 1
        ]
        assert all(w == value for w in ups)
        # total flux through each level is exactly the unit
        assert math.fsum(ups) == 1.0


@pytest.mark.parametrize("name", sorted(STANDARD_DOCS))
def test_base_flow_conserves(name):
    _, stairs = standard_wedge(name, 8)
    flow = layered_unit_flow(stairs.steps, 6)
    assert flow.kirchhoff_residual() <= 1e-12


def test_tube_golden_fences(triangle):
    _, stairs = triangle
    tube = derive_tube(stairs, (2, 2), 5)
    assert tube.lower.tolist() == [[2, 1, 0, 0]]
    assert tube.upper.tolist() == [[2, 2, 2, 3]]
    assert tube.frozen_reference.tolist() == [[2, 2, 2, 0]]
    assert tube.straighten((2, 2)) == (0, 0)
    assert tube.straighten((1, 3)) == (1, 1)
    assert tube.unstraighten((1, 1)) == (1, 3)
    with pytest.raises(NotInTubeError):
        tube.straighten((0, 2))


def test_tube_rejects_bad_anchors(triangle):
    _, stairs = triangle
    with pytest.raises(AnchorOutsideTruncationError):
        derive_tube(stairs, (5, 5), 5)  # layer 5 is not inside layer <= 4
    with pytest.raises(AnchorOutsideTruncationError):
        derive_tube(stairs, (0, 0, 0), 5)


def test_tube_slices_match_staircase_boxes(cone2):
    _, stairs = cone2
    tube = derive_tube(stairs, (1, 2, 3), 8)
    verify_straightening(tube)
    assert set(tube.straighten(v) for v in tube.vertices()) == set(
        staircase_wedge_vertices(stairs.steps, tube.top)
    )


def test_transport_preserves_energy_bitwise(cone2):
    _, stairs = cone2
    tube, base, carried = anchored_flow(stairs, (1, 2, 3), 8)
    assert carried.energy == base.energy
    assert carried.kirchhoff_residual() <= 1e-12
    assert sorted(abs(v) for v in carried.edges.values()) == sorted(
        abs(v) for v in base.edges.values()
    )


def test_flow_energy_dominates_anchor_resistance(triangle):
    """Thomson principle: any unit flow energy bounds the resistance from
    its source to the sink layer."""
    _, stairs = triangle
    anchor = (2, 3)
    tube, _, carried = anchored_flow(stairs, anchor, 7)
    graph = build_truncation_graph(stairs, 7)
    phi = potentials(graph, anchor)
    exact = phi[graph.index[anchor]]
    assert exact <= carried.energy + 1e-12


def test_origin_tube_is_staircase_wedge(triangle):
    _, stairs = triangle
    tube = derive_tube(stairs, origin(1), 6)
    assert tube.lower.tolist() == [[0] * 7]
    assert tube.upper.tolist() == [stairs.steps[0][:7].tolist()]
    bound = resistance_upper_bound(stairs, 6)
    _, base, carried = anchored_flow(stairs, origin(1), 6)
    assert bound.energy == base.energy == carried.energy


def test_transport_requires_matching_top(triangle):
    _, stairs = triangle
    tube = derive_tube(stairs, (1, 1), 5)
    wrong = layered_unit_flow(stairs.steps, 2)
    with pytest.raises(ValueError):
        transport_flow(tube, wrong)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 2))
def test_random_anchor_tubes(seed, d):
    """Tube properties, bijection, conservation, and energy transport hold
    for arbitrary anchors in arbitrary wedges."""
    rng = np.random.default_rng(seed)
    profile = validate_profile(random_profile_doc(rng, d))
    r = int(rng.integers(3, 8))
    stairs = derive_staircase(profile, r + 1)
    candidates = enumerate_truncation(stairs, r - 1)
    anchor = candidates[int(rng.integers(0, len(candidates)))]
    tube, base, carried = anchored_flow(stairs, anchor, r)
    verify_straightening(tube)
    assert carried.energy == base.energy
    assert base.kirchhoff_residual() <= 1e-12
    assert carried.kirchhoff_residual() <= 1e-12
