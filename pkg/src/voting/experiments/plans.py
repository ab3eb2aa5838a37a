"""Experiment plans: loading, built-in desk plans and per-cell derivations."""

import json
import math
from pathlib import Path
from typing import Any, Optional

import yaml

from src.voting.errors import InvalidParam
from src.voting.graph.generators import derive_seed
from src.voting.kernels import betrayal as bt
from src.voting.state.schemas import (
    BetrayalSpec,
    ExperimentPlan,
    HalfKRule,
    HypothesisRule,
    InitRule,
    ParamRule,
)

DESK_N = [1024, 2048, 4096, 8192]


def load_plan(path: str | Path) -> ExperimentPlan:
    """Plan from a ``.json`` or YAML file (pydantic ValidationError on bad fields)."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    data: Any = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    return ExperimentPlan.model_validate(data)


def builtin_plan(name: str, **overrides: Any) -> ExperimentPlan:
    """Desk-scale plans for the consensus-time regimes.

    worst-case-best-of-two / worst-case-best-of-three
        G(n, 3 n^-1/2), balanced init, log n scaling
    lower-bound
        same graphs, best-of-three, fit of the 5th percentile
    fast-consensus
        best-of-three on G(4096, 0.3) from delta0 = 0.1
    fast-consensus-balanced
        the balanced-init baseline on the same graphs
    growing-k
        best-of-(2k+1), k in {4, 16, 64} on G(n, 4k / sqrt(n))
    growing-k-root
        best-of-(2k+1) with k = ceil(n^1/4) on G(n, 4k / sqrt(n))
    adversarial
        best-of-three on G(n, 3 n^-1/2) from the worst-case proxies
    """
    gnp_sqrt = ParamRule(coef=3.0, n_exponent=-0.5)
    plans: dict[str, dict[str, Any]] = {
        "worst-case-best-of-two": dict(
            family="gnp", n_values=DESK_N, param=gnp_sqrt, voting=bt.best_of(2),
            hypothesis=HypothesisRule(kind="worst_case", C=3.0, eps=1.0),
        ),
        "worst-case-best-of-three": dict(
            family="gnp", n_values=DESK_N, param=gnp_sqrt, voting=bt.best_of(3),
            hypothesis=HypothesisRule(kind="worst_case", C=3.0, eps=1.0),
        ),
        "lower-bound": dict(
            family="gnp", n_values=DESK_N, param=gnp_sqrt, voting=bt.best_of(3),
        ),
        "fast-consensus": dict(
            family="gnp", n_values=[4096], param=ParamRule(coef=0.3), voting=bt.best_of(3),
            init=InitRule(kind="fraction", delta0=0.1),
            hypothesis=HypothesisRule(kind="initial_bias", C=1.0),
        ),
        "fast-consensus-balanced": dict(
            family="gnp", n_values=[4096], param=ParamRule(coef=0.3), voting=bt.best_of(3),
        ),
        "growing-k": dict(
            family="gnp", n_values=[2048, 8192],
            param=ParamRule(coef=4.0, n_exponent=-0.5, k_exponent=1.0),
            half_k=HalfKRule(values=[4, 16, 64]), phase_model="growing_k",
            hypothesis=HypothesisRule(kind="growing_k", C=4.0),
        ),
        "growing-k-root": dict(
            family="gnp", n_values=[1024, 4096, 16384],
            param=ParamRule(coef=4.0, n_exponent=-0.5, k_exponent=1.0),
            half_k=HalfKRule(), phase_model="growing_k",
            hypothesis=HypothesisRule(kind="growing_k", C=4.0),
        ),
        "adversarial": dict(
            family="gnp", n_values=DESK_N, param=gnp_sqrt, voting=bt.best_of(3),
            init=InitRule(kind="adversarial"),
        ),
    }
    if name not in plans:
        raise InvalidParam(f"unknown built-in plan {name!r}", known=sorted(plans))
    fields = {"plan_id": name, **plans[name], **overrides}
    return ExperimentPlan.model_validate(fields)


def cell_voting(plan: ExperimentPlan, half_k: Optional[int]) -> BetrayalSpec:
    """Best-of-(2k+1) when the plan grows k, the plan's function otherwise."""
    return bt.best_of(2 * half_k + 1) if half_k is not None else plan.voting


def cell_param(plan: ExperimentPlan, n: int, half_k: Optional[int]) -> Optional[float]:
    """Family parameter for a cell: p capped at 1, or an admissible even-volume degree."""
    if plan.family == "complete-self-loop" or plan.param is None:
        return None
    value = plan.param.value(n, half_k)
    if plan.family == "gnp":
        return min(value, 1.0)
    d = max(3, int(round(value)))
    if (n * d) % 2:
        d += 1
    return float(d)


def graph_seed(plan: ExperimentPlan, cell: int) -> int:
    return derive_seed(plan.master_seed, cell)


def trial_seed(plan: ExperimentPlan, cell: int, trial: int) -> int:
    return derive_seed(plan.master_seed, cell, trial)


def max_steps_for(plan: ExperimentPlan, n: int) -> int:
    return plan.max_steps_factor * max(1, math.ceil(math.log2(max(n, 2))))


def hypothesis_holds(
    rule: HypothesisRule,
    init: InitRule,
    n: int,
    half_k: Optional[int],
    lam: float,
    pi2: float,
    pi3: float,
) -> bool:
    """Whether a measured graph lies in the regime the plan's hypothesis names.

        worst_case    lambda <= C n^-1/4, ||pi||_2 <= C / sqrt(n), ||pi||_3 <= eps / sqrt(n)
        initial_bias  lambda <= C, ||pi||_2 <= C / sqrt(log n) and, for a fixed
                      initial bias, |delta0| >= C max(lambda^2, ||pi||_2 sqrt(log n))
        growing_k     lambda <= C k^-1/2 n^-1/4, ||pi||_2 <= C / sqrt(n),
                      ||pi||_3 <= C k^-1/6 / sqrt(n)
    """
    C = rule.C
    root_n = math.sqrt(n)
    log_n = math.log(n)
    if rule.kind == "none":
        return True
    if rule.kind == "worst_case":
        return lam <= C * n**-0.25 and pi2 <= C / root_n and pi3 <= rule.eps / root_n
    if rule.kind == "initial_bias":
        ok = lam <= C and pi2 <= C / math.sqrt(log_n)
        if init.kind == "fraction" and init.delta0 is not None:
            ok = ok and abs(init.delta0) >= C * max(lam**2, pi2 * math.sqrt(log_n))
        return ok
    k = half_k or 1
    return (
        lam <= C * k**-0.5 * n**-0.25
        and pi2 <= C / root_n
        and pi3 <= C * k ** (-1.0 / 6.0) / root_n
    )
