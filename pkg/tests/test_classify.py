"""Series partial sums and recurrence verdicts."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_profile_doc, standard_wedge
from wedgewalk import (
    HorizonExceededError,
    Staircase,
    VERDICTS,
    classify,
    derive_staircase,
    doubling_schedule,
    partial_sums,
    validate_profile,
)


def test_doubling_schedule():
    assert doubling_schedule(1) == [1]
    assert doubling_schedule(10) == [1, 2, 5, 10]
    assert doubling_schedule(16) == [1, 2, 4, 8, 16]
    with pytest.raises(ValueError):
        doubling_schedule(0)


def test_partial_sums_halfline(halfline):
    _, stairs = halfline
    report = partial_sums(stairs, [10, 100])
    assert report.sums == ((10, 10.0), (100, 100.0))


def test_partial_sums_monotone_and_positive(cone2):
    _, stairs = cone2
    report = partial_sums(stairs, doubling_schedule(32))
    values = [s for _, s in report.sums]
    assert values[0] == 1.0  # first term is always 1
    assert all(b > a for a, b in zip(values, values[1:]))


def test_partial_sums_horizon(triangle):
    _, stairs = triangle  # derived to 40 levels
    with pytest.raises(HorizonExceededError):
        partial_sums(stairs, [100])


def test_certified_halfline(halfline):
    profile, stairs = halfline
    report = classify(stairs, profile, 200)
    assert report.verdict == "RecurrentCertified"
    assert "bounded" in report.rationale


def test_certified_corridor():
    profile, stairs = standard_wedge("corridor", 64)
    report = classify(stairs, profile, 64)
    assert report.verdict == "RecurrentCertified"
    # doubling the window never flips a certificate
    profile, stairs = standard_wedge("corridor", 128)
    assert classify(stairs, profile, 128).verdict == "RecurrentCertified"


def test_unbounded_profile_never_certified(triangle):
    profile, stairs = triangle
    report = classify(stairs, profile, 32)
    assert report.verdict != "RecurrentCertified"


def test_triangle_recurrent_heuristic():
    profile = validate_profile({"d": 1, "profiles": [{"type": "linear", "a": 1, "b": 0}]})
    stairs = derive_staircase(profile, 10**4)
    report = classify(stairs, profile, 10**4)
    assert report.verdict == "RecurrentHeuristic"


def test_cone2_transient_heuristic():
    profile = validate_profile(
        {"d": 2, "profiles": [{"type": "linear", "a": 1, "b": 0}] * 2}
    )
    stairs = derive_staircase(profile, 10**4)
    report = classify(stairs, profile, 10**4)
    assert report.verdict == "TransientHeuristic"
    assert report.final_sum == pytest.approx(math.pi**2 / 6, abs=2e-4)


def test_thresholds_are_honored():
    profile = validate_profile({"d": 1, "profiles": [{"type": "linear", "a": 1, "b": 0}]})
    stairs = derive_staircase(profile, 2048)
    strict = classify(stairs, profile, 2048, recurrent_threshold=0.5)
    assert strict.verdict == "Inconclusive"


def test_inconclusive_on_slow_convergence():
    """Terms like 1/(n log^2 n): convergent, but too slow for the tail
    test and too flat for the growth test."""
    n_max = 4096
    levels = np.arange(n_max + 1)
    slow = np.zeros(n_max + 1, dtype=np.int64)
    for n in range(1, n_max + 1):
        target = int(math.log(n + 1) ** 2)
        slow[n] = min(slow[n - 1] + 1, target)
    fast = levels.copy()
    profile = validate_profile(
        {"d": 2, "profiles": [{"type": "linear", "a": 1, "b": 0}, {"type": "inf"}]}
    )
    stairs = Staircase(profile=profile, levels=n_max, steps=(fast, slow))
    report = classify(stairs, profile, n_max)
    assert report.verdict == "Inconclusive"


def test_report_verdicts_come_from_fixed_set(cone2):
    profile, stairs = cone2
    report = classify(stairs, profile, 32)
    assert report.verdict in VERDICTS


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), d=st.integers(1, 2))
def test_classify_properties(seed, d):
    rng = np.random.default_rng(seed)
    profile = validate_profile(random_profile_doc(rng, d))
    try:
        stairs = derive_staircase(profile, 512)
    except HorizonExceededError:
        return  # short table; nothing to classify at this depth
    report = classify(stairs, profile, 512)
    assert report.verdict in VERDICTS
    values = [s for _, s in report.sums]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert report.rationale
