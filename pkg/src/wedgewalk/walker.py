"""Monte Carlo walkers: killed-walk Green estimates and collision counts.

Walks are simple random walks on the wedge graph: at each step the
walker picks uniformly among its in-wedge neighbors, so the step law
depends on the local degree.  Trials draw from per-trial random streams
spawned deterministically from (base seed, stream, trial), which makes
every reported number reproducible bit for bit and independent of how
trials are batched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutsideTruncationError
from .geometry import in_wedge, neighbors, wedge_degree
from .profiles import Profile, Staircase, Vertex, layer_index, layer_index_array


@dataclass(frozen=True)
class WalkConfig:
    """Simulation parameters shared by both Monte Carlo modes."""

    seed: int
    T: int
    trials: int
    kill_r: int | None = None

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.T < 0:
            raise ValueError(f"T must be >= 0, got {self.T}")


@dataclass(frozen=True)
class GreenEstimate:
    """Monte Carlo estimate of a diagonal Green value."""

    mean: float
    stderr: float
    per_trial: np.ndarray = field(repr=False)
    exited: int = 0


@dataclass(frozen=True)
class CollisionStats:
    """Collision counts of two independent walkers from the origin."""

    counts: np.ndarray = field(repr=False)
    mean: float
    stderr: float
    fractions: tuple[tuple[int, float], ...]


def step(profile: Profile, v: Vertex, rng: np.random.Generator) -> Vertex:
    """One uniform step among the wedge neighbors of v.

    Reference scalar implementation; the batched engines reproduce it
    draw for draw (same neighbor order, same index formula).
    """
    options = neighbors(profile, v)
    if not options:
        return v
    # floor(u*k) can round up to k for u just below 1, hence the clamp.
    choice = min(int(rng.random() * len(options)), len(options) - 1)
    return options[choice]


def _trial_generators(seed: int, stream: int, trials: int) -> list[np.random.Generator]:
    return [
        np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(stream, t)))
        for t in range(trials)
    ]


class _BatchWalker:
    """Lockstep batch of independent walkers on one wedge.

    Each walker consumes one uniform draw per step from its own stream,
    dead or alive, so a trial's trajectory never depends on the batch.
    """

    CHUNK = 4096

    def __init__(self, profile: Profile, start: Vertex, rngs: list[np.random.Generator]):
        self.profile = profile
        self.d = profile.d
        self.rngs = rngs
        m = len(rngs)
        self.pos = np.tile(np.asarray(start, dtype=np.int64), (m, 1))
        self._buffer = np.empty((m, 0))
        self._cursor = 0

    def _uniforms(self) -> np.ndarray:
        if self._cursor >= self._buffer.shape[1]:
            self._buffer = np.stack([rng.random(self.CHUNK) for rng in self.rngs])
            self._cursor = 0
        col = self._buffer[:, self._cursor]
        self._cursor += 1
        return col

    def _profile_caps(self, levels: np.ndarray) -> np.ndarray:
        """floor(f_i(level)) per walker and coordinate, shape (m, d)."""
        caps = np.empty((levels.shape[0], self.d))
        for i, f in enumerate(self.profile.functions):
            caps[:, i] = f.values(levels)
        return np.floor(caps)

    def advance(self, active: np.ndarray) -> None:
        """One step for every walker where active is set."""
        pos = self.pos
        levels = pos[:, -1]
        caps_here = self._profile_caps(levels)
        caps_below = self._profile_caps(np.maximum(levels - 1, 0))
        m = pos.shape[0]
        valid = np.zeros((m, 2 * (self.d + 1)), dtype=bool)
        for i in range(self.d):
            valid[:, 2 * i] = pos[:, i] + 1 <= caps_here[:, i]
            valid[:, 2 * i + 1] = pos[:, i] >= 1
        valid[:, 2 * self.d] = True
        down_ok = levels >= 1
        for i in range(self.d):
            down_ok &= pos[:, i] <= caps_below[:, i]
        valid[:, 2 * self.d + 1] = down_ok

        degree = valid.sum(axis=1)
        u = self._uniforms()
        choice = np.floor(u * degree).astype(np.int64)
        np.minimum(choice, np.maximum(degree - 1, 0), out=choice)
        cum = np.cumsum(valid, axis=1)
        slot = np.argmax(cum > choice[:, None], axis=1)

        move = active & (degree > 0)
        axis = slot // 2
        sign = 1 - 2 * (slot % 2)
        rows = np.flatnonzero(move)
        pos[rows, axis[rows]] += sign[rows]


def green_mc(
    stairs: Staircase, x: Vertex, kill_r: int, cfg: WalkConfig
) -> GreenEstimate:
    """Estimate the diagonal Green value at x for the walk killed on
    leaving layers 0..kill_r.

    Per trial: visits to x before the first arrival in layer kill_r + 1,
    divided by deg(x).  The horizon T caps each trial as a safeguard;
    pick T well above the typical exit time so the truncation bias is
    negligible against the standard error.
    """
    profile = stairs.profile
    stairs.check_levels(kill_r + 1)
    if not in_wedge(profile, x) or layer_index(stairs, x) > kill_r:
        raise OutsideTruncationError(f"{x} is not within layers 0..{kill_r}")
    deg = wedge_degree(profile, x)
    rngs = _trial_generators(cfg.seed, 0, cfg.trials)
    walker = _BatchWalker(profile, x, rngs)
    target = np.asarray(x, dtype=np.int64)
    visits = np.zeros(cfg.trials, dtype=np.int64)
    alive = np.ones(cfg.trials, dtype=bool)
    visits += 1  # time-0 visit
    for _ in range(cfg.T):
        if not alive.any():
            break
        walker.advance(alive)
        exited = layer_index_array(stairs, walker.pos) > kill_r
        alive &= ~exited
        at_target = alive & (walker.pos == target).all(axis=1)
        visits[at_target] += 1
    per_trial = visits / deg
    mean = float(per_trial.mean())
    stderr = (
        float(per_trial.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
    )
    return GreenEstimate(
        mean=mean, stderr=stderr, per_trial=per_trial, exited=int((~alive).sum())
    )


def collision_run(
    profile: Profile,
    cfg: WalkConfig,
    thresholds: tuple[int, ...] = (1, 2, 5, 10),
) -> CollisionStats:
    """Count meetings of two independent walkers started at the origin.

    A collision at time t means both walkers sit on the same vertex at
    time t; time 0 always collides.  Streams 0 and 1 of the seed drive
    the two walkers.
    """
    d = profile.d
    start = (0,) * (d + 1)
    first = _BatchWalker(profile, start, _trial_generators(cfg.seed, 0, cfg.trials))
    second = _BatchWalker(profile, start, _trial_generators(cfg.seed, 1, cfg.trials))
    alive = np.ones(cfg.trials, dtype=bool)
    counts = np.ones(cfg.trials, dtype=np.int64)  # time-0 collision
    for _ in range(cfg.T):
        first.advance(alive)
        second.advance(alive)
        counts += (first.pos == second.pos).all(axis=1)
    mean = float(counts.mean())
    stderr = (
        float(counts.std(ddof=1) / math.sqrt(cfg.trials)) if cfg.trials > 1 else 0.0
    )
    fractions = tuple(
        (k, float((counts >= k).mean())) for k in thresholds
    )
    return CollisionStats(counts=counts, mean=mean, stderr=stderr, fractions=fractions)
