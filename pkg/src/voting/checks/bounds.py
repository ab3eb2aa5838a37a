"""Deterministic inequalities of the walk measures, checked on one instance.

Every check computes an exact left-hand side and the right-hand side with the
measured lambda. lambda's certified error enters as bound * (1 + 10 tol);
a check passes iff lhs <= bound * (1 + rel_tol) + abs_tol.
"""

import math
from typing import Optional

from config.settings import settings
from src.voting.dynamics.configuration import Configuration
from src.voting.dynamics.engine import exact_moments
from src.voting.errors import InvalidSpec, NotSmooth
from src.voting.graph.core import (
    Graph,
    VertexSet,
    edge_measure_Q,
    pi2_measure,
    pi_measure,
    q_h,
    r_h,
    transition_vector,
    weighted_walk_deviation,
)
from src.voting.kernels import betrayal as bt
from src.voting.kernels.binomial import best_of_k_f
from src.voting.state.schemas import (
    BetrayalSpec,
    BokConstantsReport,
    CheckInstance,
    CheckResult,
    SpectralSummary,
    UpdatingProfile,
)
from src.voting.utils.logging_config import get_logger, log_run_event

logger = get_logger(__name__)

EXTREME_BIAS = 0.5  # variance checks beyond this |delta| are informational


def _instance(
    g: Graph,
    seed: int,
    function: str = "",
    **sets: Optional[VertexSet],
) -> CheckInstance:
    return CheckInstance(
        graph=g.name,
        n=g.n,
        sets={name: s.cardinality for name, s in sets.items() if s is not None},
        function=function,
        seed=seed,
    )


def _result(
    name: str,
    lhs: float,
    bound: float,
    summary: SpectralSummary,
    instance: CheckInstance,
    informational: bool = False,
) -> CheckResult:
    bound = bound * (1.0 + 10.0 * summary.tol)
    passed = lhs <= bound * (1.0 + settings.check_rel_tol) + settings.check_abs_tol
    result = CheckResult(
        name=name,
        lhs=lhs,
        bound=bound,
        slack=bound - lhs,
        passed=passed,
        informational=informational,
        instance=instance,
    )
    if not passed and not informational:
        log_run_event(
            logger,
            "inequality_check_failed",
            graph_context={"name": instance.graph, "n": instance.n},
            spec_context={"function": instance.function},
            seed=instance.seed,
            outcome={"check": name, "lhs": lhs, "bound": bound},
        )
    return result


def _need(profile: UpdatingProfile) -> UpdatingProfile:
    if not profile.available:
        raise NotSmooth("check needs a C^2 function", spec=profile.spec_label)
    return profile


def _sqrt_pi3(g: Graph) -> float:
    """||pi||_3^(3/2) = sqrt(sum pi^3)."""
    return math.sqrt(g.distribution.pi3_total)


# === SET-PAIR CHECKS ===

def check_mixing(
    g: Graph, s: VertexSet, t: VertexSet, summary: SpectralSummary, seed: int = 0
) -> CheckResult:
    """|Q(S,T) - pi(S)pi(T)| <= lambda sqrt(pi(S)pi(T)(1-pi(S))(1-pi(T)))."""
    ps, pt = pi_measure(g, s), pi_measure(g, t)
    lhs = abs(edge_measure_Q(g, s, t) - ps * pt)
    bound = summary.lam * math.sqrt(max(ps * pt * (1.0 - ps) * (1.0 - pt), 0.0))
    return _result("mixing", lhs, bound, summary, _instance(g, seed, S=s, T=t))


def check_weighted_variance(
    g: Graph, s: VertexSet, summary: SpectralSummary, seed: int = 0
) -> CheckResult:
    """sum_v pi(v)(P(v,S) - pi(S))^2 <= lambda^2 pi(S)(1 - pi(S))."""
    ps = pi_measure(g, s)
    lhs = weighted_walk_deviation(g, s)
    bound = summary.lam**2 * ps * (1.0 - ps)
    return _result("weighted_variance", lhs, bound, summary, _instance(g, seed, S=s))


def check_square_deviation(
    g: Graph, s: VertexSet, summary: SpectralSummary, seed: int = 0
) -> CheckResult:
    """|sum_v pi(v) P(v,S)^2 - pi(S)^2| <= lambda^2 pi(S)(1 - pi(S))."""
    ps = pi_measure(g, s)
    second = math.fsum(g.distribution.pi * transition_vector(g, s) ** 2)
    lhs = abs(second - ps * ps)
    bound = summary.lam**2 * ps * (1.0 - ps)
    return _result("square_deviation", lhs, bound, summary, _instance(g, seed, S=s))


def check_taylor_q_h(
    g: Graph,
    s: VertexSet,
    t: VertexSet,
    h: BetrayalSpec,
    profile: UpdatingProfile,
    summary: SpectralSummary,
    seed: int = 0,
) -> CheckResult:
    """|Q_h(S,T) - pi(S)h(pi(T)) - h'(pi(T))(Q(S,T) - pi(S)pi(T))|
    <= K2(h)/2 lambda^2 pi(T)(1 - pi(T))."""
    profile = _need(profile)
    assert profile.K2f is not None
    ps, pt = pi_measure(g, s), pi_measure(g, t)
    fn = lambda x: bt.betrayal_value(h, x)  # noqa: E731
    value = q_h(g, s, t, fn)
    h_pt = float(bt.betrayal_value(h, pt))
    slope = float(bt.betrayal_d1(h, pt))
    lhs = abs(value - ps * h_pt - slope * (edge_measure_Q(g, s, t) - ps * pt))
    bound = profile.K2f / 2.0 * summary.lam**2 * pt * (1.0 - pt)
    return _result("taylor_q_h", lhs, bound, summary, _instance(g, seed, h.label, S=s, T=t))


def check_r_h_deviation(
    g: Graph,
    s: VertexSet,
    t: VertexSet,
    h: BetrayalSpec,
    profile: UpdatingProfile,
    summary: SpectralSummary,
    seed: int = 0,
) -> CheckResult:
    """|R_h(S,T) - pi_2(S)h(pi(T))| <= K1(h) ||pi||_3^(3/2) lambda sqrt(pi(T)(1 - pi(T)))."""
    profile = _need(profile)
    assert profile.K1f is not None
    pt = pi_measure(g, t)
    fn = lambda x: bt.betrayal_value(h, x)  # noqa: E731
    lhs = abs(r_h(g, s, t, fn) - pi2_measure(g, s) * float(bt.betrayal_value(h, pt)))
    bound = profile.K1f * _sqrt_pi3(g) * summary.lam * math.sqrt(max(pt * (1.0 - pt), 0.0))
    return _result("r_h_deviation", lhs, bound, summary, _instance(g, seed, h.label, S=s, T=t))


# === ONE-ROUND MOMENT CHECKS ===

def check_mean_drift(
    g: Graph,
    a: VertexSet,
    spec: BetrayalSpec,
    profile: UpdatingProfile,
    summary: SpectralSummary,
    seed: int = 0,
) -> CheckResult:
    """|E[pi(A')] - H_f(pi(A))| <= K2(f) lambda (|delta| + lambda) pi(A)(1 - pi(A))."""
    profile = _need(profile)
    assert profile.K2f is not None
    cfg = Configuration.of(g, a)
    mean, _ = exact_moments(cfg, g, spec)
    alpha, lam = cfg.pi_a, summary.lam
    lhs = abs(mean - float(bt.updating_function(spec, alpha)))
    bound = profile.K2f * lam * (abs(cfg.delta) + lam) * alpha * (1.0 - alpha)
    return _result("mean_drift", lhs, bound, summary, _instance(g, seed, spec.label, A=a))


def check_variance(
    g: Graph,
    a: VertexSet,
    spec: BetrayalSpec,
    profile: UpdatingProfile,
    summary: SpectralSummary,
    seed: int = 0,
) -> CheckResult:
    """|Var[pi(A')] - ||pi||_2^2 g(1/2)|
    <= K1(g) (||pi||_2^2 |delta| / 2 + 2 ||pi||_3^(3/2) lambda sqrt(pi(A)(1 - pi(A))))."""
    profile = _need(profile)
    assert profile.K1g is not None
    cfg = Configuration.of(g, a)
    _, var = exact_moments(cfg, g, spec)
    alpha, norm2sq = cfg.pi_a, g.distribution.pi2_total
    lhs = abs(var - norm2sq * profile.g_half)
    bound = profile.K1g * (
        0.5 * norm2sq * abs(cfg.delta)
        + 2.0 * _sqrt_pi3(g) * summary.lam * math.sqrt(max(alpha * (1.0 - alpha), 0.0))
    )
    return _result(
        "variance", lhs, bound, summary, _instance(g, seed, spec.label, A=a),
        informational=abs(cfg.delta) > EXTREME_BIAS,
    )


def check_symmetric_moments(
    g: Graph,
    a: VertexSet,
    spec: BetrayalSpec,
    profile: UpdatingProfile,
    summary: SpectralSummary,
    seed: int = 0,
) -> tuple[CheckResult, CheckResult]:
    """Sharper mean and variance bounds for f with f(x) + f(1 - x) = 1.

    mean:     |E[pi(A')] - H_f(pi(A))| <= K2(f)/2 lambda^2 pi(A)(1 - pi(A))
    variance: |Var[pi(A')] - ||pi||_2^2 g(pi(A))| <= K1(g) lambda sqrt(pi(A)(1 - pi(A))) ||pi||_3^(3/2)
    """
    if not bt.is_symmetric(spec):
        raise InvalidSpec("symmetric moment bounds need f(x) + f(1 - x) = 1", spec=spec.label)
    profile = _need(profile)
    assert profile.K2f is not None and profile.K1g is not None
    cfg = Configuration.of(g, a)
    mean, var = exact_moments(cfg, g, spec)
    alpha, lam = cfg.pi_a, summary.lam
    spread = alpha * (1.0 - alpha)
    instance = _instance(g, seed, spec.label, A=a)

    mean_result = _result(
        "symmetric_mean",
        abs(mean - float(bt.updating_function(spec, alpha))),
        profile.K2f / 2.0 * lam**2 * spread,
        summary,
        instance,
    )
    g_alpha = float(bt.variance_kernel(spec, alpha))
    var_result = _result(
        "symmetric_variance",
        abs(var - g.distribution.pi2_total * g_alpha),
        profile.K1g * lam * math.sqrt(max(spread, 0.0)) * _sqrt_pi3(g),
        summary,
        instance,
    )
    return mean_result, var_result


# === GROWING-K MOMENT CHECKS ===

def check_bok_mean(
    g: Graph,
    a: VertexSet,
    constants: BokConstantsReport,
    summary: SpectralSummary,
    seed: int = 0,
) -> CheckResult:
    """|E[pi(A')] - f_{2k+1}(pi(A))| <= C lambda (|delta| + lambda) pi(A)(1 - pi(A)).

    C is the larger of 0.4k and half the measured max |f''|, so the bound
    always dominates the symmetric K2/2 lambda^2 form.
    """
    spec = bt.best_of(constants.order)
    cfg = Configuration.of(g, a)
    mean, _ = exact_moments(cfg, g, spec)
    alpha, lam = cfg.pi_a, summary.lam
    factor = max(constants.mean_constant, constants.f2_max / 2.0)
    lhs = abs(mean - float(best_of_k_f(constants.order, alpha)))
    bound = factor * lam * (abs(cfg.delta) + lam) * alpha * (1.0 - alpha)
    return _result("bok_mean", lhs, bound, summary, _instance(g, seed, spec.label, A=a))


def check_bok_variance(
    g: Graph,
    a: VertexSet,
    constants: BokConstantsReport,
    summary: SpectralSummary,
    seed: int = 0,
) -> CheckResult:
    """|Var[pi(A')] - g(1/2) ||pi||_2^2| <= 2 sqrt(k) (||pi||_2^2 |delta| / 2 + lambda ||pi||_3^(3/2))."""
    spec = bt.best_of(constants.order)
    cfg = Configuration.of(g, a)
    _, var = exact_moments(cfg, g, spec)
    norm2sq = g.distribution.pi2_total
    lhs = abs(var - 0.25 * norm2sq)
    bound = constants.variance_constant * (
        0.5 * norm2sq * abs(cfg.delta) + summary.lam * _sqrt_pi3(g)
    )
    return _result(
        "bok_variance", lhs, bound, summary, _instance(g, seed, spec.label, A=a),
        informational=abs(cfg.delta) > EXTREME_BIAS,
    )
