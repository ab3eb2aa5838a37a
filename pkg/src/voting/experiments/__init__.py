"""Declarative experiment plans, the cell pipeline, statistics and fits."""

from src.voting.experiments.plans import builtin_plan, hypothesis_holds, load_plan
from src.voting.experiments.stats import cell_statistics, recompute_summary, whp_threshold
from src.voting.experiments.fitting import (
    compare_to_constant,
    fit_scaling,
    lower_bound_threshold,
    smallest_bias_constant,
)
from src.voting.experiments.drift import drift_audit
from src.voting.experiments.runner import replay_trial, run_plan

__all__ = [
    "builtin_plan",
    "cell_statistics",
    "compare_to_constant",
    "drift_audit",
    "fit_scaling",
    "hypothesis_holds",
    "load_plan",
    "lower_bound_threshold",
    "recompute_summary",
    "replay_trial",
    "run_plan",
    "smallest_bias_constant",
    "whp_threshold",
]
