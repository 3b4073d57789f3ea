"""Recurrence and transience verdicts from the box-reciprocal series.

The wedge is recurrent exactly when the series over levels of the
reciprocal staircase box sizes diverges.  Finite data cannot certify
divergence in general, so the classifier separates a proof-grade case
(syntactically bounded profiles whose staircases have frozen) from
threshold-based heuristics on the partial-sum growth, and says which
kind of verdict it is returning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .profiles import Profile, Staircase, box_reciprocal_terms

VERDICTS = (
    "RecurrentCertified",
    "RecurrentHeuristic",
    "TransientHeuristic",
    "Inconclusive",
)

DEFAULT_RECURRENT_THRESHOLD = 0.01
DEFAULT_TRANSIENT_TAIL = 0.01
DEFAULT_TRANSIENT_INCREMENT = 1e-4


@dataclass(frozen=True)
class SeriesReport:
    """Partial sums of the recurrence series plus an optional verdict."""

    sums: tuple[tuple[int, float], ...]
    verdict: str | None
    rationale: str

    @property
    def final_sum(self) -> float:
        return self.sums[-1][1]


def doubling_schedule(n_max: int) -> list[int]:
    """Ascending checkpoints n_max, n_max/2, n_max/4, ... down to 1."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    points = set()
    n = n_max
    while n >= 1:
        points.add(n)
        n //= 2
    return sorted(points)


def partial_sums(stairs: Staircase, schedule: list[int]) -> SeriesReport:
    """Exact partial sums of the series at the requested checkpoints.

    Each checkpoint N sums the first N terms; summation is correctly
    rounded, so the values do not depend on chunking or order.
    """
    if not schedule:
        raise ValueError("schedule must be nonempty")
    order = sorted(set(schedule))
    if order[0] < 1:
        raise ValueError(f"checkpoints must be >= 1, got {order[0]}")
    n_max = order[-1]
    terms = box_reciprocal_terms(stairs, n_max).tolist()
    sums = [(n, math.fsum(terms[:n])) for n in order]
    return SeriesReport(
        sums=tuple(sums), verdict=None, rationale="partial sums only"
    )


def _term(stairs: Staircase, n: int) -> float:
    return 1.0 / math.prod(int(arr[n]) + 1 for arr in stairs.steps)


def _tail_estimate(stairs: Staircase, n_max: int) -> tuple[float, float]:
    """Power-law tail extrapolation through the terms at N/2-1 and N-1.

    Fits term_n ~ c * n^(-alpha) and integrates beyond N.  Returns
    (alpha, tail); tail is +inf when the fitted decay is too slow for
    the series to converge.  Constant terms fit alpha = 0.
    """
    lo, hi = n_max // 2 - 1, n_max - 1
    if lo < 1:
        return 0.0, math.inf
    t_lo, t_hi = _term(stairs, lo), _term(stairs, hi)
    alpha = math.log(t_lo / t_hi) / math.log(hi / lo)
    if alpha <= 1.0:
        return alpha, math.inf
    return alpha, t_hi * hi / (alpha - 1.0)


def classify(
    stairs: Staircase,
    profile: Profile,
    n_max: int,
    recurrent_threshold: float = DEFAULT_RECURRENT_THRESHOLD,
    transient_tail: float = DEFAULT_TRANSIENT_TAIL,
    transient_increment: float = DEFAULT_TRANSIENT_INCREMENT,
) -> SeriesReport:
    """Verdict on recurrence from partial sums up to n_max terms.

    Certification requires every profile to be syntactically bounded and
    every staircase to be constant over the second half of the window;
    the terms then stay above a fixed positive floor, so the series
    provably diverges.  Otherwise the growth of the partial sums decides
    between heuristic verdicts, with thresholds documented in the
    rationale.  Heuristic verdicts are evidence, not proof.
    """
    schedule = doubling_schedule(n_max)
    report = partial_sums(stairs, schedule)
    sums = report.sums

    bounded = all(f.bounded for f in profile.functions)
    if bounded:
        frozen = all(
            stairs.steps[i][n_max // 2 : n_max + 1].min()
            == stairs.steps[i][n_max // 2 : n_max + 1].max()
            for i in range(stairs.d)
        )
        if frozen:
            floor = 1.0 / math.prod(int(arr[n_max]) + 1 for arr in stairs.steps)
            return SeriesReport(
                sums=sums,
                verdict="RecurrentCertified",
                rationale=(
                    "every profile is syntactically bounded and every staircase "
                    f"is constant on [{n_max // 2}, {n_max}]; terms never drop "
                    f"below {floor:.6g}, so the series diverges"
                ),
            )

    s_full = sums[-1][1]
    s_half = sums[-2][1] if len(sums) >= 2 else 0.0
    increment = s_full - s_half
    relative = increment / s_half if s_half > 0 else math.inf

    if relative >= recurrent_threshold:
        return SeriesReport(
            sums=sums,
            verdict="RecurrentHeuristic",
            rationale=(
                f"relative growth {relative:.6g} over the last doubling is at "
                f"least the recurrence threshold {recurrent_threshold:g}; "
                "heuristic evidence of divergence, not a proof"
            ),
        )

    alpha, tail = _tail_estimate(stairs, n_max)
    if tail < transient_tail * s_full and increment < transient_increment * s_full:
        return SeriesReport(
            sums=sums,
            verdict="TransientHeuristic",
            rationale=(
                f"extrapolated tail {tail:.6g} (decay exponent {alpha:.3g}) is "
                f"below {transient_tail:g} of the partial sum and the last "
                f"doubling added {relative:.6g} relatively, below "
                f"{transient_increment:g}; heuristic evidence of convergence"
            ),
        )

    return SeriesReport(
        sums=sums,
        verdict="Inconclusive",
        rationale=(
            f"relative growth {relative:.6g} is below the recurrence threshold "
            f"{recurrent_threshold:g} but the tail estimate does not certify "
            "convergence either"
        ),
    )
