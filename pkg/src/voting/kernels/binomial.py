"""Best-of-k betrayal function and its derivatives.

f_k(x) = sum_{i > k/2} C(k, i) x^i (1-x)^(k-i) is the upper binomial tail,
which equals the regularized incomplete beta I_x(m, k - m + 1) with
m = floor(k/2) + 1. scipy evaluates it in log space, so k up to 1e5 is safe.
The derivatives are the Beta(m, k - m + 1) density and its slope.
"""

import math
from fractions import Fraction

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import betainc, betaln, xlog1py, xlogy


def _shape(k: int) -> tuple[int, int]:
    if k < 1:
        raise ValueError(f"best-of-k needs k >= 1, got {k}")
    m = k // 2 + 1
    return m, k - m + 1


def best_of_k_f(k: int, x: ArrayLike) -> np.ndarray:
    a, b = _shape(k)
    return np.asarray(betainc(a, b, np.asarray(x, dtype=np.float64)))


def best_of_k_d1(k: int, x: ArrayLike) -> np.ndarray:
    a, b = _shape(k)
    x = np.asarray(x, dtype=np.float64)
    return np.exp(xlogy(a - 1, x) + xlog1py(b - 1, -x) - betaln(a, b))


def best_of_k_d2(k: int, x: ArrayLike) -> np.ndarray:
    a, b = _shape(k)
    x = np.asarray(x, dtype=np.float64)
    log_c = -betaln(a, b)
    out = np.zeros_like(x)
    if a > 1:
        out += (a - 1) * np.exp(xlogy(a - 2, x) + xlog1py(b - 1, -x) + log_c)
    if b > 1:
        out -= (b - 1) * np.exp(xlogy(a - 1, x) + xlog1py(b - 2, -x) + log_c)
    return out


def bok_slope_at_half(order: int) -> Fraction:
    """Exact f'_{2k+1}(1/2) = (2k+1) C(2k, k) / 4^k for odd ``order`` = 2k+1."""
    if order < 1 or order % 2 == 0:
        raise ValueError(f"order must be odd and positive, got {order}")
    k = order // 2
    return Fraction(order * math.comb(2 * k, k), 4**k)
