"""Best-of-(2k+1) constants when k grows with n.

The slope at 1/2 is exact rational arithmetic; bounds of the form
c * sqrt(k) are compared through squares so no rounding enters the verdict.
"""

import math
from fractions import Fraction

from src.voting.errors import InvalidParam
from src.voting.kernels.binomial import best_of_k_d2, bok_slope_at_half
from src.voting.kernels.profile import max_abs
from src.voting.state.schemas import BokConstantsReport, BokThresholdReport
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)

LOWER_SLOPE = Fraction(105, 100)  # f'(1/2) >= 1.05 sqrt(k)
UPPER_SLOPE = 2  # f'(1/2) <= 2 sqrt(k)
CURVATURE = 1.6  # |f''| <= 1.6 k
MEAN_FACTOR = 0.4
VARIANCE_FACTOR = 2.0


def bok_growing_constants(k: int, grid_points: int | None = None) -> BokConstantsReport:
    """Constants of best-of-(2k+1) and the checks of its growing-k bounds."""
    if k < 1:
        raise InvalidParam("k must be >= 1", k=k)
    order = 2 * k + 1
    slope = bok_slope_at_half(order)
    square = slope * slope

    f2_max, f2_argmax, _ = max_abs(lambda x: best_of_k_d2(order, x), grid_points)
    return BokConstantsReport(
        k=k,
        order=order,
        f1_half=float(slope),
        f1_half_exact=f"{slope.numerator}/{slope.denominator}",
        lower_ok=square >= LOWER_SLOPE**2 * k,
        upper_ok=square <= UPPER_SLOPE**2 * k,
        upper_tight_ok=float(square) <= 9.0 * k / math.pi,
        f2_max=f2_max,
        f2_argmax=f2_argmax,
        f2_ok=f2_max <= CURVATURE * k,
        mean_constant=MEAN_FACTOR * k,
        variance_constant=VARIANCE_FACTOR * math.sqrt(k),
    )


def bok_threshold_scan(k_max: int, grid_points: int | None = 2000) -> BokThresholdReport:
    """Smallest k0 such that each bound holds for every k in [k0, k_max].

    None means the bound fails at k_max itself.
    """
    if k_max < 1:
        raise InvalidParam("k_max must be >= 1", k_max=k_max)
    reports = [bok_growing_constants(k, grid_points) for k in range(1, k_max + 1)]

    def first_stable(flags: list[bool]) -> int | None:
        k0 = None
        for k in range(len(flags), 0, -1):
            if not flags[k - 1]:
                break
            k0 = k
        return k0

    result = BokThresholdReport(
        k_max=k_max,
        k0_lower=first_stable([r.lower_ok for r in reports]),
        k0_upper=first_stable([r.upper_ok for r in reports]),
        k0_second=first_stable([r.f2_ok for r in reports]),
    )
    logger.info("bok_threshold_scan_finished", **result.model_dump())
    return result
