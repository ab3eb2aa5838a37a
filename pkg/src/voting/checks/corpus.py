"""Seeded randomized corpus for the inequality checks.

A small pool of graphs is generated once from the master seed; instance i
draws its graph, sets and function from ``derive_seed(master, i)``. Set
sizes are spread over the whole range by first drawing a density q and then
including each vertex with probability q.
"""

from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Literal, Optional

import numpy as np
import polars as pl

from config.settings import settings
from src.voting.checks import bounds
from src.voting.graph.core import Graph, VertexSet
from src.voting.graph.generators import GeneratorSpec, derive_seed, generate
from src.voting.graph.spectral import expansion
from src.voting.kernels import betrayal as bt
from src.voting.kernels.growing import bok_growing_constants
from src.voting.kernels.profile import derive_profile
from src.voting.state.schemas import (
    BetrayalSpec,
    BokConstantsReport,
    CheckResult,
    SpectralSummary,
    UpdatingProfile,
)
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)

Suite = Literal[
    "mixing", "q_h", "r_h", "moments", "variance", "symmetric", "square", "bok", "all"
]
SUITES: tuple[Suite, ...] = (
    "mixing", "q_h", "r_h", "moments", "variance", "symmetric", "square", "bok",
)

POOL_SPECS = (
    GeneratorSpec(family="gnp", n=256, param=0.3),
    GeneratorSpec(family="gnp", n=512, param=0.2),
    GeneratorSpec(family="gnp", n=128, param=0.1),
    GeneratorSpec(family="random-regular", n=128, param=6, method="repair"),
    GeneratorSpec(family="complete-self-loop", n=64),
)
TAYLOR_FUNCTIONS = (bt.best_of(3), bt.best_of(5), bt.careful(3), bt.careful(2))
MOMENT_FUNCTIONS = (bt.best_of(2), bt.best_of(3), bt.careful(2))
SYMMETRIC_FUNCTIONS = (bt.best_of(3), bt.best_of(5))
BOK_HALF_K = (2, 4, 8)


@dataclass(frozen=True, eq=False)
class PoolGraph:
    graph: Graph
    summary: SpectralSummary


@lru_cache(maxsize=8)
def graph_pool(master_seed: int) -> tuple[PoolGraph, ...]:
    pool = []
    for i, spec in enumerate(POOL_SPECS):
        graph = generate(spec.model_copy(update={"seed": derive_seed(master_seed, -1, i)}))
        pool.append(PoolGraph(graph, expansion(graph)))
    return tuple(pool)


@lru_cache(maxsize=32)
def _profile(spec: BetrayalSpec) -> UpdatingProfile:
    return derive_profile(spec)


def _random_set(rng: np.random.Generator, n: int) -> VertexSet:
    density = rng.random()
    return VertexSet(rng.random(n) < density)


def _bounded_set(rng: np.random.Generator, g: Graph, max_bias: float) -> VertexSet:
    """Random set with |delta| <= max_bias (falls back to a balanced set)."""
    for _ in range(16):
        s = _random_set(rng, g.n)
        if abs(2.0 * float(g.distribution.pi[s.mask].sum()) - 1.0) <= max_bias:
            return s
    return VertexSet.from_indices(g.n, rng.permutation(g.n)[: g.n // 2])


def _suite_results(
    suite: Suite, item: PoolGraph, rng: np.random.Generator, seed: int
) -> Iterator[CheckResult]:
    g, summary = item.graph, item.summary
    if suite == "mixing":
        yield bounds.check_mixing(g, _random_set(rng, g.n), _random_set(rng, g.n), summary, seed)
    elif suite == "square":
        yield bounds.check_square_deviation(g, _random_set(rng, g.n), summary, seed)
    elif suite == "variance":
        yield bounds.check_weighted_variance(g, _random_set(rng, g.n), summary, seed)
    elif suite in ("q_h", "r_h"):
        h = TAYLOR_FUNCTIONS[rng.integers(len(TAYLOR_FUNCTIONS))]
        s, t = _random_set(rng, g.n), _random_set(rng, g.n)
        check = bounds.check_taylor_q_h if suite == "q_h" else bounds.check_r_h_deviation
        yield check(g, s, t, h, _profile(h), summary, seed)
    elif suite == "moments":
        f = MOMENT_FUNCTIONS[rng.integers(len(MOMENT_FUNCTIONS))]
        yield bounds.check_mean_drift(g, _random_set(rng, g.n), f, _profile(f), summary, seed)
        a = _bounded_set(rng, g, bounds.EXTREME_BIAS)
        yield bounds.check_variance(g, a, f, _profile(f), summary, seed)
    elif suite == "symmetric":
        f = SYMMETRIC_FUNCTIONS[rng.integers(len(SYMMETRIC_FUNCTIONS))]
        yield from bounds.check_symmetric_moments(
            g, _random_set(rng, g.n), f, _profile(f), summary, seed
        )
    elif suite == "bok":
        constants = _bok_constants(int(BOK_HALF_K[rng.integers(len(BOK_HALF_K))]))
        yield bounds.check_bok_mean(g, _random_set(rng, g.n), constants, summary, seed)
        a = _bounded_set(rng, g, bounds.EXTREME_BIAS)
        yield bounds.check_bok_variance(g, a, constants, summary, seed)


@lru_cache(maxsize=16)
def _bok_constants(half_k: int) -> BokConstantsReport:
    return bok_growing_constants(half_k)


def run_check_corpus(
    suite: Suite = "all",
    instances: Optional[int] = None,
    seed: Optional[int] = None,
) -> list[CheckResult]:
    """Every CheckResult of ``instances`` seeded instances per suite."""
    instances = settings.check_instances if instances is None else instances
    seed = settings.check_master_seed if seed is None else seed
    pool = graph_pool(seed)
    suites = SUITES if suite == "all" else (suite,)

    results: list[CheckResult] = []
    for name in suites:
        index = SUITES.index(name)
        for i in range(instances):
            inst_seed = derive_seed(seed, index, i)
            rng = np.random.default_rng(inst_seed)
            item = pool[int(rng.integers(len(pool)))]
            results.extend(_suite_results(name, item, rng, inst_seed))

    failures = sum(1 for r in results if not r.passed and not r.informational)
    logger.info("check_corpus_finished", suite=suite, instances=instances, seed=seed,
                results=len(results), failures=failures)
    return results


def results_frame(results: list[CheckResult]) -> pl.DataFrame:
    rows = [
        {
            "name": r.name,
            "lhs": r.lhs,
            "bound": r.bound,
            "slack": r.slack,
            "passed": r.passed,
            "informational": r.informational,
            "graph": r.instance.graph,
            "n": r.instance.n,
            "sets": ";".join(f"{k}={v}" for k, v in r.instance.sets.items()),
            "function": r.instance.function,
            "seed": r.instance.seed,
        }
        for r in results
    ]
    return pl.DataFrame(rows, schema={
        "name": pl.Utf8, "lhs": pl.Float64, "bound": pl.Float64, "slack": pl.Float64,
        "passed": pl.Boolean, "informational": pl.Boolean, "graph": pl.Utf8, "n": pl.Int64,
        "sets": pl.Utf8, "function": pl.Utf8, "seed": pl.UInt64,
    })


def write_check_csv(results: list[CheckResult], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    results_frame(results).write_csv(path)
    return path
