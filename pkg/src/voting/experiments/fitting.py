"""Scaling fits of consensus times across the cells of a plan.

Regressors are on log2 scale: ``log_n`` uses log2 n, ``log_n_over_log_k``
uses log2 n / log2 k. Cells that aborted, violated the plan hypothesis or
never reached consensus do not enter a fit.
"""

import math
from typing import Literal, Optional, Sequence

import numpy as np
from scipy import stats

from src.voting.errors import InsufficientCells, InvalidParam
from src.voting.experiments.plans import hypothesis_holds
from src.voting.state.schemas import (
    CellSummary,
    ExperimentPlan,
    ExperimentResult,
    ModelComparison,
    ScalingFit,
    UpdatingProfile,
)
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)

Model = Literal["log_n", "log_n_over_log_k", "const"]
Statistic = Literal["median", "median_grouped", "p05", "p95", "mean"]

MIN_CELLS = 3


def _points(
    result: ExperimentResult, model: Model, statistic: Statistic
) -> tuple[np.ndarray, np.ndarray]:
    xs: list[float] = []
    ys: list[float] = []
    for cell in result.cells:
        y = getattr(cell, statistic)
        if cell.aborted or cell.hypothesis_ok is False or y is None:
            continue
        if model == "log_n_over_log_k":
            if cell.half_k is None or cell.half_k < 2:
                continue
            xs.append(math.log2(cell.n) / math.log2(cell.half_k))
        else:
            xs.append(math.log2(cell.n))
        ys.append(float(y))
    if len(ys) < MIN_CELLS:
        raise InsufficientCells(
            f"scaling fit needs at least {MIN_CELLS} usable cells", count=len(ys),
            plan_id=result.plan_id,
        )
    return np.asarray(xs), np.asarray(ys)


def fit_scaling(
    result: ExperimentResult, model: Model = "log_n", statistic: Statistic = "median"
) -> ScalingFit:
    """Least-squares fit of ``statistic`` against the model regressor."""
    x, y = _points(result, model, statistic)
    if model == "const":
        mean = float(y.mean())
        fit = ScalingFit(model=model, statistic=statistic, slope=0.0, intercept=mean,
                         r_squared=0.0, sse=float(np.sum((y - mean) ** 2)), cells=len(y))
    else:
        if np.ptp(x) == 0.0:
            raise InvalidParam("regressor is constant across cells", model=model)
        reg = stats.linregress(x, y)
        residual = y - (reg.intercept + reg.slope * x)
        fit = ScalingFit(
            model=model,
            statistic=statistic,
            slope=float(reg.slope),
            intercept=float(reg.intercept),
            r_squared=float(reg.rvalue**2),
            sse=float(np.sum(residual**2)),
            cells=len(y),
        )
    logger.info("scaling_fit", plan_id=result.plan_id, **fit.model_dump())
    return fit


def compare_to_constant(
    result: ExperimentResult,
    model: Literal["log_n", "log_n_over_log_k"] = "log_n",
    statistic: Statistic = "median",
    alpha: float = 0.05,
) -> ModelComparison:
    """F-test: does the slope explain significantly more than a constant?"""
    linear = fit_scaling(result, model, statistic)
    constant = fit_scaling(result, "const", statistic)
    dof = linear.cells - 2
    if dof <= 0:
        raise InsufficientCells("F-test needs more cells than parameters", count=linear.cells)
    if linear.sse == 0.0:
        f_stat = math.inf if constant.sse > 0.0 else 0.0
    else:
        f_stat = (constant.sse - linear.sse) / (linear.sse / dof)
    p_value = float(stats.f.sf(f_stat, 1, dof)) if math.isfinite(f_stat) else 0.0
    return ModelComparison(
        model=model,
        statistic=statistic,
        f_statistic=f_stat,
        p_value=p_value,
        cells=linear.cells,
        significant=p_value < alpha,
    )


def lower_bound_threshold(profile: UpdatingProfile, n: int) -> float:
    """0.5 log2 n / log2 H'(1/2): the 5th-percentile floor of the lower-bound plan."""
    if profile.h1_half is None or profile.h1_half <= 1.0:
        raise InvalidParam("lower-bound threshold needs H'(1/2) > 1", spec=profile.spec_label)
    return 0.5 * math.log2(n) / math.log2(profile.h1_half)


def usable_cells(cells: list[CellSummary]) -> int:
    return sum(1 for c in cells if not c.aborted and c.hypothesis_ok is not False
               and c.median is not None)


def smallest_bias_constant(
    result: ExperimentResult,
    plan: ExperimentPlan,
    candidates: Sequence[float],
    min_r_squared: float = 0.9,
) -> Optional[float]:
    """Smallest bias constant C at which the log n fit holds.

    The hypothesis is re-evaluated from the stored lambda and pi norms for
    each candidate C; the fit "holds" when at least MIN_CELLS cells remain
    and the log_n model reaches ``min_r_squared``.
    """
    for C in sorted(candidates):
        rule = plan.hypothesis.model_copy(update={"C": C})
        cells = [
            cell.model_copy(update={"hypothesis_ok": hypothesis_holds(
                rule, plan.init, cell.n, cell.half_k, cell.lam, cell.pi2, cell.pi3,
            )})
            for cell in result.cells
            if cell.lam is not None and cell.pi2 is not None and cell.pi3 is not None
        ]
        trial = result.model_copy(update={"cells": cells})
        try:
            fit = fit_scaling(trial, "log_n")
        except (InsufficientCells, InvalidParam):
            continue
        if fit.r_squared >= min_r_squared:
            logger.info("bias_constant_found", plan_id=plan.plan_id, C=C,
                        r_squared=fit.r_squared)
            return C
    return None
