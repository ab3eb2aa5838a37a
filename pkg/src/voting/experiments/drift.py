"""Empirical audit of the one-step bias growth in the growth band (phase II).

For every recorded transition delta_t -> delta_{t+1} that starts in phase II
the audit counts the "bad" event in which the bias fails to grow, and sets
the frequency against the mean of the per-transition tail bounds:

    general    |delta'| <= (1 + eps_h / 8) |delta|,
               bound min(1, 2 exp(-eps_h^2 delta^2 / (128 ||pi||_2^2)))
    growing_k  |delta'| < 0.025 sqrt(k) |delta|,
               bound min(1, 2 exp(-0.00125 k delta^2 / ||pi||_2^2))

The growing_k constant is not free: the one-step mean of best-of-(2k+1)
satisfies |E delta'| >= 0.05 sqrt(k) |delta| in the band, and the
concentration step bounds the bad event by 2 exp(-0.5 |E delta'|^2 / ||pi||_2^2),
so 0.5 * 0.05^2 = 0.00125 multiplies k delta^2.

The audit passes when frequency <= mean bound + 3 binomial standard errors.
"""

import math
from typing import Literal, Optional

from src.voting.dynamics.phases import GrowingKClassifier, PhaseClassifier, PhaseModel
from src.voting.errors import InvalidParam, NoPhaseIISteps
from src.voting.state.schemas import (
    DriftAuditReport,
    SpectralSummary,
    Trajectory,
    UpdatingProfile,
)
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def drift_audit(
    trajectories: list[Trajectory],
    profile: UpdatingProfile,
    summary: SpectralSummary,
    n: int,
    pi_norm2: float,
    *,
    form: Literal["general", "growing_k"] = "general",
    half_k: Optional[int] = None,
    classifier: Optional[PhaseModel] = None,
) -> DriftAuditReport:
    """Audit the phase-II transitions of ``trajectories``.

    ``classifier`` replaces the analytical phase bands, whose growth window is
    empty below very large n; the tail bound keeps its own constants.
    """
    norm_sq = pi_norm2**2
    if form == "general":
        if classifier is None:
            classifier = PhaseClassifier.from_profile(profile, summary, pi_norm2, n)
        assert profile.eps_h is not None
        eps_h = profile.eps_h
        factor = 1.0 + eps_h / 8.0

        def bad(d0: float, d1: float) -> bool:
            return abs(d1) <= factor * abs(d0)

        def tail(d0: float) -> float:
            return min(1.0, 2.0 * math.exp(-(eps_h**2) * d0**2 / (128.0 * norm_sq)))
    else:
        if half_k is None:
            raise InvalidParam("growing_k audit needs half_k")
        if classifier is None:
            classifier = GrowingKClassifier.for_order(half_k, n)
        factor = 0.025 * math.sqrt(half_k)

        def bad(d0: float, d1: float) -> bool:
            return abs(d1) < factor * abs(d0)

        def tail(d0: float) -> float:
            return min(1.0, 2.0 * math.exp(-0.00125 * half_k * d0**2 / norm_sq))

    transitions = bad_events = 0
    bound_total = 0.0
    for trajectory in trajectories:
        steps = trajectory.steps
        for current, following in zip(steps, steps[1:]):
            if classifier.classify(current.delta) != "II":
                continue
            transitions += 1
            bad_events += bad(current.delta, following.delta)
            bound_total += tail(current.delta)

    if transitions == 0:
        raise NoPhaseIISteps("no recorded transition starts in phase II",
                             trajectories=len(trajectories))

    frequency = bad_events / transitions
    bound_mean = bound_total / transitions
    allowance = 3.0 * math.sqrt(bound_mean * (1.0 - bound_mean) / transitions)
    report = DriftAuditReport(
        form=form,
        factor=factor,
        transitions=transitions,
        bad_events=bad_events,
        empirical_frequency=frequency,
        bound_mean=bound_mean,
        allowance=allowance,
        passed=frequency <= bound_mean + allowance,
    )
    logger.info("drift_audit_finished", **report.model_dump())
    return report
