"""Betrayal functions f, the updating function H_f and their derivatives.

A betrayal function gives the probability that a vertex switches to the
opposing opinion when a fraction x of its neighbours hold it. Built-ins have
analytic derivatives; custom functions (a cubic-spline table or a numpy
expression in ``x``) are differentiated by central differences.
"""

from collections.abc import Callable
from functools import lru_cache
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.interpolate import CubicSpline

from config.settings import settings
from src.voting.errors import InvalidSpec, NotSmooth
from src.voting.kernels.binomial import best_of_k_d1, best_of_k_d2, best_of_k_f
from src.voting.kernels.expression import compile_expression
from src.voting.state.schemas import BetrayalSpec

_Curve = Callable[[np.ndarray], np.ndarray]


# === CONSTRUCTORS ===

def pull() -> BetrayalSpec:
    return BetrayalSpec(kind="pull")


def best_of(k: int) -> BetrayalSpec:
    return BetrayalSpec(kind="best-of-k", k=k)


def careful(k: int) -> BetrayalSpec:
    return BetrayalSpec(kind="k-careful", k=k)


def majority() -> BetrayalSpec:
    return BetrayalSpec(kind="majority")


def lazy(rho: float, inner: BetrayalSpec) -> BetrayalSpec:
    return BetrayalSpec(kind="lazy", rho=rho, inner=inner)


def tabulated(xs: Sequence[float], ys: Sequence[float]) -> BetrayalSpec:
    return BetrayalSpec(kind="custom", table_x=tuple(xs), table_y=tuple(ys))


def expression(text: str) -> BetrayalSpec:
    compile_expression(text)
    return BetrayalSpec(kind="custom", expression=text)


def from_name(kind: str, k: int | None = None, rho: float | None = None) -> BetrayalSpec:
    """Spec from a CLI/API style name; ``rho`` wraps the result in a lazy variant."""
    if kind == "pull":
        base = pull()
    elif kind in ("best-of-k", "best-of"):
        if k is None:
            raise InvalidSpec("best-of-k needs k")
        base = best_of(k)
    elif kind in ("k-careful", "careful"):
        if k is None:
            raise InvalidSpec("k-careful needs k")
        base = careful(k)
    elif kind == "majority":
        base = majority()
    else:
        raise InvalidSpec(f"unknown betrayal function {kind!r}", kind=kind)
    return lazy(rho, base) if rho is not None and rho != 1.0 else base


# === CUSTOM CURVES ===

@lru_cache(maxsize=64)
def _custom_curve(spec: BetrayalSpec) -> _Curve:
    if spec.expression is not None:
        return compile_expression(spec.expression)

    xs = np.asarray(spec.table_x, dtype=np.float64)
    ys = np.asarray(spec.table_y, dtype=np.float64)
    if len(xs) < 4 or np.any(np.diff(xs) <= 0) or xs[0] > 0.0 or xs[-1] < 1.0:
        raise InvalidSpec("table needs >= 4 increasing points covering [0, 1]", size=len(xs))
    spline = CubicSpline(xs, ys)
    return lambda x: np.asarray(spline(x), dtype=np.float64)


def _central_d1(curve: _Curve, x: np.ndarray) -> np.ndarray:
    h = settings.fd_step
    lo = np.clip(x - h, 0.0, 1.0)
    hi = np.clip(x + h, 0.0, 1.0)
    return (curve(hi) - curve(lo)) / (hi - lo)


def _central_d2(curve: _Curve, x: np.ndarray) -> np.ndarray:
    h = settings.fd_step
    c = np.clip(x, h, 1.0 - h)
    return (curve(c + h) - 2.0 * curve(c) + curve(c - h)) / (h * h)


# === EVALUATORS ===

def _as_array(x: ArrayLike) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def is_smooth(spec: BetrayalSpec) -> bool:
    """Whether f is C^2 (false only for majority and lazy majority)."""
    if spec.kind == "majority":
        return False
    if spec.kind == "lazy":
        assert spec.inner is not None
        return is_smooth(spec.inner)
    return True


def betrayal_value(spec: BetrayalSpec, x: ArrayLike) -> np.ndarray:
    x = _as_array(x)
    match spec.kind:
        case "pull":
            return x.copy()
        case "best-of-k":
            assert spec.k is not None
            return best_of_k_f(spec.k, x)
        case "k-careful":
            assert spec.k is not None
            return np.power(x, spec.k)
        case "majority":
            return np.where(x > 0.5, 1.0, np.where(x == 0.5, 0.5, 0.0))
        case "lazy":
            assert spec.inner is not None and spec.rho is not None
            return spec.rho * betrayal_value(spec.inner, x)
        case _:
            return _custom_curve(spec)(x)


def betrayal_d1(spec: BetrayalSpec, x: ArrayLike) -> np.ndarray:
    x = _as_array(x)
    match spec.kind:
        case "pull":
            return np.ones_like(x)
        case "best-of-k":
            assert spec.k is not None
            return best_of_k_d1(spec.k, x)
        case "k-careful":
            assert spec.k is not None
            if spec.k == 1:
                return np.ones_like(x)
            return spec.k * np.power(x, spec.k - 1)
        case "majority":
            raise NotSmooth("majority has no derivative at 1/2", kind=spec.kind)
        case "lazy":
            assert spec.inner is not None and spec.rho is not None
            return spec.rho * betrayal_d1(spec.inner, x)
        case _:
            return _central_d1(_custom_curve(spec), x)


def betrayal_d2(spec: BetrayalSpec, x: ArrayLike) -> np.ndarray:
    x = _as_array(x)
    match spec.kind:
        case "pull":
            return np.zeros_like(x)
        case "best-of-k":
            assert spec.k is not None
            return best_of_k_d2(spec.k, x)
        case "k-careful":
            assert spec.k is not None
            if spec.k == 1:
                return np.zeros_like(x)
            if spec.k == 2:
                return np.full_like(x, 2.0)
            return spec.k * (spec.k - 1) * np.power(x, spec.k - 2)
        case "majority":
            raise NotSmooth("majority has no second derivative", kind=spec.kind)
        case "lazy":
            assert spec.inner is not None and spec.rho is not None
            return spec.rho * betrayal_d2(spec.inner, x)
        case _:
            return _central_d2(_custom_curve(spec), x)


def switch_probabilities(
    spec: BetrayalSpec, counts: np.ndarray, degrees: np.ndarray
) -> np.ndarray:
    """f(counts / degrees) per vertex; majority ties are decided in integers."""
    if spec.kind == "majority":
        twice = 2 * counts
        return np.where(twice > degrees, 1.0, np.where(twice == degrees, 0.5, 0.0))
    if spec.kind == "lazy":
        assert spec.inner is not None and spec.rho is not None
        return spec.rho * switch_probabilities(spec.inner, counts, degrees)
    return betrayal_value(spec, counts / degrees)


# === UPDATING FUNCTION ===

def updating_function(spec: BetrayalSpec, x: ArrayLike) -> np.ndarray:
    """H_f(x) = x (1 - f(1 - x)) + (1 - x) f(x)."""
    x = _as_array(x)
    return x * (1.0 - betrayal_value(spec, 1.0 - x)) + (1.0 - x) * betrayal_value(spec, x)


def updating_derivative(spec: BetrayalSpec, x: ArrayLike) -> np.ndarray:
    x = _as_array(x)
    y = 1.0 - x
    return (
        1.0
        - betrayal_value(spec, y)
        + x * betrayal_d1(spec, y)
        - betrayal_value(spec, x)
        + y * betrayal_d1(spec, x)
    )


def updating_second_derivative(spec: BetrayalSpec, x: ArrayLike) -> np.ndarray:
    x = _as_array(x)
    y = 1.0 - x
    return (
        2.0 * betrayal_d1(spec, y)
        - 2.0 * betrayal_d1(spec, x)
        - x * betrayal_d2(spec, y)
        + y * betrayal_d2(spec, x)
    )


def variance_kernel(spec: BetrayalSpec, x: ArrayLike) -> np.ndarray:
    """g(x) = f(x) (1 - f(x))."""
    f = betrayal_value(spec, x)
    return f * (1.0 - f)


def variance_kernel_d1(spec: BetrayalSpec, x: ArrayLike) -> np.ndarray:
    return betrayal_d1(spec, x) * (1.0 - 2.0 * betrayal_value(spec, x))


# === SHAPE CHECKS ===

def unit_grid(points: int | None = None) -> np.ndarray:
    return np.linspace(0.0, 1.0, (points or settings.grid_points) + 1)


def is_symmetric(spec: BetrayalSpec, tol: float | None = None) -> bool:
    """f(x) + f(1 - x) = 1 on the grid."""
    tol = settings.symmetry_tolerance if tol is None else tol
    x = unit_grid()
    return bool(np.max(np.abs(betrayal_value(spec, x) + betrayal_value(spec, 1.0 - x) - 1.0)) <= tol)


def well_formed(spec: BetrayalSpec, tol: float | None = None) -> bool:
    """f(0) = 0 and f maps the grid into [0, 1]."""
    tol = settings.qm_margin if tol is None else tol
    values = betrayal_value(spec, unit_grid())
    return bool(abs(values[0]) <= tol and values.min() >= -tol and values.max() <= 1.0 + tol)


def validate(spec: BetrayalSpec) -> BetrayalSpec:
    if not well_formed(spec):
        raise InvalidSpec("betrayal function must satisfy f(0) = 0 and f([0, 1]) in [0, 1]",
                          spec=spec.label)
    return spec
