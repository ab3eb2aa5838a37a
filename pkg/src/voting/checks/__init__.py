"""Exact checks of the walk-measure inequalities on sampled instances."""

from src.voting.checks.corpus import SUITES, run_check_corpus, write_check_csv
from src.voting.checks.bounds import (
    check_bok_mean,
    check_bok_variance,
    check_mean_drift,
    check_mixing,
    check_r_h_deviation,
    check_square_deviation,
    check_symmetric_moments,
    check_taylor_q_h,
    check_variance,
    check_weighted_variance,
)

__all__ = [
    "SUITES",
    "run_check_corpus",
    "write_check_csv",
    "check_bok_mean",
    "check_bok_variance",
    "check_mean_drift",
    "check_mixing",
    "check_r_h_deviation",
    "check_square_deviation",
    "check_symmetric_moments",
    "check_taylor_q_h",
    "check_variance",
    "check_weighted_variance",
]
