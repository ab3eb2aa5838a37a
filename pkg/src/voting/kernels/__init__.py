"""Betrayal functions, updating functions and their verified constants."""

from src.voting.kernels.betrayal import (
    best_of,
    betrayal_d1,
    betrayal_d2,
    betrayal_value,
    careful,
    expression,
    from_name,
    is_smooth,
    is_symmetric,
    lazy,
    majority,
    pull,
    switch_probabilities,
    tabulated,
    updating_derivative,
    updating_function,
    updating_second_derivative,
    variance_kernel,
    well_formed,
)
from src.voting.kernels.binomial import best_of_k_d1, best_of_k_d2, best_of_k_f, bok_slope_at_half
from src.voting.kernels.growing import bok_growing_constants, bok_threshold_scan
from src.voting.kernels.profile import derive_profile
from src.voting.kernels.quasi_majority import quasi_majority_check

__all__ = [
    "best_of",
    "betrayal_d1",
    "betrayal_d2",
    "betrayal_value",
    "careful",
    "expression",
    "from_name",
    "is_smooth",
    "is_symmetric",
    "lazy",
    "majority",
    "pull",
    "switch_probabilities",
    "tabulated",
    "updating_derivative",
    "updating_function",
    "updating_second_derivative",
    "variance_kernel",
    "well_formed",
    "best_of_k_d1",
    "best_of_k_d2",
    "best_of_k_f",
    "bok_slope_at_half",
    "bok_growing_constants",
    "bok_threshold_scan",
    "derive_profile",
    "quasi_majority_check",
]
