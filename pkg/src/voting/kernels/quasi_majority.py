"""Numerical verifier for the five quasi-majority conditions.

(1) f is C^2; (2) 0 < f(1/2) < 1; (3) H_f(x) < x on (0, 1/2);
(4) H_f'(1/2) > 1; (5) H_f'(0) < 1.

Strict inequalities are certified with the ``qm_margin`` tolerance on a
grid; this is a verifier, not a proof. For a non-smooth f the slopes in (4)
and (5) are read off H_f by finite differences.
"""

import numpy as np

from config.settings import settings
from src.voting.kernels import betrayal as bt
from src.voting.state.schemas import BetrayalSpec, ConditionVerdict, QuasiMajorityReport
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def _slopes(spec: BetrayalSpec) -> tuple[float, float, str]:
    if bt.is_smooth(spec):
        return (
            float(bt.updating_derivative(spec, 0.5)),
            float(bt.updating_derivative(spec, 0.0)),
            "analytic",
        )
    h = settings.fd_step
    H = lambda x: float(bt.updating_function(spec, x))  # noqa: E731
    at_half = (H(0.5 + h) - H(0.5 - h)) / (2 * h)
    at_zero = (H(h) - H(0.0)) / h
    return at_half, at_zero, "finite difference of H"


def quasi_majority_check(spec: BetrayalSpec) -> QuasiMajorityReport:
    margin = settings.qm_margin
    smooth = bt.is_smooth(spec)
    f_half = float(bt.betrayal_value(spec, 0.5))

    interior = np.linspace(0.0, 0.5, settings.grid_points + 1)[1:-1]
    gap = float(np.max(bt.updating_function(spec, interior) - interior))
    h1_half, h1_zero, how = _slopes(spec)

    conditions = [
        ConditionVerdict(index=1, name="C2", passed=smooth,
                         detail="" if smooth else "step function"),
        ConditionVerdict(index=2, name="interior f(1/2)", passed=0.0 < f_half < 1.0,
                         value=f_half),
        ConditionVerdict(index=3, name="H below diagonal on (0, 1/2)", passed=gap <= margin,
                         value=gap, detail="max of H(x) - x on the interior grid"),
        ConditionVerdict(index=4, name="H'(1/2) > 1", passed=h1_half > 1.0 + margin,
                         value=h1_half, detail=how),
        ConditionVerdict(index=5, name="H'(0) < 1", passed=h1_zero < 1.0 - margin,
                         value=h1_zero, detail=how),
    ]
    formed = bt.well_formed(spec)
    values = bt.betrayal_value(spec, bt.unit_grid())
    report = QuasiMajorityReport(
        spec_label=spec.label,
        conditions=conditions,
        passed=formed and all(c.passed for c in conditions),
        well_formed=formed,
        surjective=bool(values.max() >= 1.0 - margin),
        symmetric=bt.is_symmetric(spec),
    )
    logger.info("quasi_majority_checked", spec=spec.label, passed=report.passed,
                failed=report.failed)
    return report
