"""Drift constants of H_f: slopes at 1/2 and 0 and the K maxima."""

from collections.abc import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from config.settings import settings
from src.voting.errors import NotSmooth
from src.voting.kernels import betrayal as bt
from src.voting.state.schemas import BetrayalSpec, UpdatingProfile
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)


def max_abs(
    fn: Callable[[np.ndarray], np.ndarray], points: int | None = None
) -> tuple[float, float, float]:
    """max |fn| on [0, 1]: grid search then bounded refinement around the argmax.

    Returns (maximum, argmax, refinement gain over the grid value).
    """
    grid = bt.unit_grid(points)
    values = np.abs(fn(grid))
    i = int(np.argmax(values))
    best, where = float(values[i]), float(grid[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    if hi > lo:
        res = minimize_scalar(
            lambda x: -float(np.abs(fn(np.array([x])))[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        if -res.fun > best:
            gain = -float(res.fun) - best
            return -float(res.fun), float(res.x), gain
    return best, where, 0.0


def derive_profile(spec: BetrayalSpec, *, strict: bool = True) -> UpdatingProfile:
    """Constants of H_f for the drift analysis.

    With ``strict`` a non-C^2 spec raises NotSmooth; otherwise the C^2 fields
    come back as None.
    """
    f_half = float(bt.betrayal_value(spec, 0.5))
    g_half = f_half * (1.0 - f_half)
    if not bt.is_smooth(spec):
        if strict:
            raise NotSmooth("profile needs a C^2 betrayal function", spec=spec.label)
        return UpdatingProfile(spec_label=spec.label, smooth=False, f_half=f_half, g_half=g_half)

    h1_half = float(bt.updating_derivative(spec, 0.5))
    h1_zero = float(bt.updating_derivative(spec, 0.0))

    k1f, _, e1 = max_abs(lambda x: bt.betrayal_d1(spec, x))
    k2f, _, e2 = max_abs(lambda x: bt.betrayal_d2(spec, x))
    k1g, _, e3 = max_abs(lambda x: bt.variance_kernel_d1(spec, x))
    k2h, _, e4 = max_abs(lambda x: bt.updating_second_derivative(spec, x))
    error_bound = max(e1, e2, e3, e4)

    if _uses_finite_differences(spec):
        # second differences lose about eps / h^2 to rounding
        error_bound += 4.0 * np.finfo(np.float64).eps / settings.fd_step**2
        k1f, k2f, k1g, k2h = (v + error_bound for v in (k1f, k2f, k1g, k2h))

    profile = UpdatingProfile(
        spec_label=spec.label,
        smooth=True,
        f_half=f_half,
        h1_half=h1_half,
        h1_zero=h1_zero,
        eps_h=h1_half - 1.0,
        eps_c=1.0 - h1_zero,
        K1f=k1f,
        K2f=k2f,
        K1g=k1g,
        K2Hf=k2h,
        Kf=max(k2f, k2h),
        g_half=g_half,
        error_bound=error_bound,
    )
    logger.debug("profile_derived", spec=spec.label, eps_h=profile.eps_h, Kf=profile.Kf)
    return profile


def _uses_finite_differences(spec: BetrayalSpec) -> bool:
    if spec.kind == "lazy":
        assert spec.inner is not None
        return _uses_finite_differences(spec.inner)
    return spec.kind == "custom"
