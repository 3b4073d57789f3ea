"""Monte Carlo walkers: stepping law, reproducibility, and convergence."""

import math

import numpy as np
import pytest

from conftest import standard_wedge
from wedgewalk import (
    OutsideTruncationError,
    WalkConfig,
    collision_run,
    derive_staircase,
    green_diagonal,
    green_mc,
    neighbors,
    step,
    validate_profile,
)
from wedgewalk.walker import _BatchWalker, _trial_generators


def test_step_forced_move(halfline):
    profile, _ = halfline
    rng = np.random.default_rng(0)
    assert step(profile, (0, 0), rng) == (0, 1)


def test_step_is_uniform_on_interior(halfline):
    profile, _ = halfline
    rng = np.random.default_rng(5)
    n = 10**5
    ups = sum(step(profile, (0, 10), rng) == (0, 11) for _ in range(n))
    # binomial(n, 1/2) three-sigma band
    assert abs(ups - n / 2) <= 3 * math.sqrt(n * 0.25)


def test_step_corner_uniform():
    profile = validate_profile({"d": 2, "profiles": [{"type": "const", "c": 4}] * 2})
    rng = np.random.default_rng(9)
    counts = {}
    n = 30000
    for _ in range(n):
        w = step(profile, (0, 0, 0), rng)
        counts[w] = counts.get(w, 0) + 1
    assert sorted(counts) == sorted(neighbors(profile, (0, 0, 0)))
    for c in counts.values():
        assert abs(c - n / 3) <= 3 * math.sqrt(n * (1 / 3) * (2 / 3))


def test_batch_matches_scalar_reference(triangle):
    """The vectorized engine must replay the scalar walk draw for draw."""
    profile, _ = triangle
    T = 300
    batch = _BatchWalker(profile, (0, 0), _trial_generators(123, 0, 3))
    active = np.ones(3, dtype=bool)
    batch_path = [batch.pos.copy()]
    for _ in range(T):
        batch.advance(active)
        batch_path.append(batch.pos.copy())
    for trial in range(3):
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=123, spawn_key=(0, trial))
        )
        v = (0, 0)
        for t in range(T):
            v = step(profile, v, rng)
            assert tuple(batch_path[t + 1][trial]) == v


def test_green_mc_time_zero(halfline):
    _, stairs = halfline
    est = green_mc(stairs, (0, 0), 3, WalkConfig(seed=1, T=0, trials=8))
    assert est.per_trial.tolist() == [1.0] * 8  # just the time-0 visit


def test_green_mc_reproducible(triangle):
    _, stairs = triangle
    cfg = WalkConfig(seed=77, T=3000, trials=50)
    a = green_mc(stairs, (0, 0), 4, cfg)
    b = green_mc(stairs, (0, 0), 4, cfg)
    assert a.per_trial.tolist() == b.per_trial.tolist()
    assert (a.mean, a.stderr) == (b.mean, b.stderr)


def test_green_mc_trials_are_batch_independent(triangle):
    _, stairs = triangle
    small = green_mc(stairs, (0, 0), 4, WalkConfig(seed=5, T=2000, trials=5))
    large = green_mc(stairs, (0, 0), 4, WalkConfig(seed=5, T=2000, trials=11))
    assert small.per_trial.tolist() == large.per_trial.tolist()[:5]


def test_green_mc_matches_exact_within_three_sigma():
    profile = validate_profile({"d": 1, "profiles": [{"type": "linear", "a": 1, "b": 0}]})
    stairs = derive_staircase(profile, 8)
    exact = green_diagonal(stairs, 5).value
    est = green_mc(stairs, (0, 0), 5, WalkConfig(seed=2024, T=20000, trials=500))
    assert abs(est.mean - exact) <= 3 * est.stderr
    assert est.exited == 500  # every walk left within the horizon


def test_green_mc_rejects_outside_start(triangle):
    _, stairs = triangle
    with pytest.raises(OutsideTruncationError):
        green_mc(stairs, (4, 4), 3, WalkConfig(seed=0, T=10, trials=2))


def test_collision_time_zero(triangle):
    profile, _ = triangle
    stats = collision_run(profile, WalkConfig(seed=3, T=0, trials=20))
    assert stats.counts.tolist() == [1] * 20
    assert stats.mean == 1.0


def test_collision_halfline_first_step(halfline):
    profile, _ = halfline
    # both walkers are forced to (0,1), so T=1 always gives 2 collisions
    stats = collision_run(profile, WalkConfig(seed=3, T=1, trials=20))
    assert stats.counts.tolist() == [2] * 20


def test_collision_reproducible_and_fractions(triangle):
    profile, _ = triangle
    cfg = WalkConfig(seed=99, T=500, trials=60)
    a = collision_run(profile, cfg)
    b = collision_run(profile, cfg)
    assert a.counts.tolist() == b.counts.tolist()
    frac = dict(a.fractions)
    assert frac[1] == 1.0  # time-0 collision is guaranteed
    assert all(0.0 <= v <= 1.0 for v in frac.values())
    assert frac[10] <= frac[5] <= frac[2] <= frac[1]


def test_walk_config_validation():
    with pytest.raises(ValueError):
        WalkConfig(seed=0, T=-1, trials=5)
    with pytest.raises(ValueError):
        WalkConfig(seed=0, T=10, trials=0)
