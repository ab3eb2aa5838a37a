"""Seeded random graph generators for the expander families under study.

Every sample is drawn from ``numpy.random.default_rng(seed)`` (PCG64), so a
(spec, seed) pair always yields the same graph. Disconnected samples are
rejected and redrawn from the same stream until ``retry_budget`` runs out.
"""

from collections import defaultdict
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from config.settings import settings
from src.voting.errors import InvalidGraph, InvalidParam, RetryExhausted
from src.voting.graph.core import Graph
from src.voting.graph.edgelist import load_edge_list
from src.voting.utils.logging_config import get_logger

logger = get_logger(__name__)

Family = Literal[
    "gnp", "random-regular", "complete-self-loop", "complete", "complete-bipartite",
    "cycle", "from-file",
]


class GeneratorSpec(BaseModel):
    """What to generate: family, size, family parameter and seed."""

    family: Family
    n: int = Field(default=0, ge=0)
    param: Optional[float] = None  # p for gnp, d for random-regular, left side for bipartite
    seed: int = 0
    retry_budget: int = Field(default_factory=lambda: settings.retry_budget, ge=1)
    method: Literal["pairing", "repair"] = Field(default_factory=lambda: settings.regular_method)
    path: Optional[str] = None

    @model_validator(mode="after")
    def _family_params(self) -> "GeneratorSpec":
        if self.family == "from-file":
            if not self.path:
                raise ValueError("from-file needs path")
            return self
        if self.n < 1:
            raise ValueError("n must be >= 1")
        return self


def derive_seed(*parts: int) -> int:
    """64-bit seed from integer parts via numpy's SeedSequence hash."""
    state = np.random.SeedSequence([int(p) & 0xFFFF_FFFF_FFFF_FFFF for p in parts])
    return int(state.generate_state(1, dtype=np.uint64)[0])


def generate(spec: GeneratorSpec) -> Graph:
    """Sample a connected graph of the requested family."""
    logger.info(
        "graph_generation_started",
        family=spec.family, n=spec.n, param=spec.param, seed=spec.seed,
    )
    if spec.family == "gnp":
        graph = _gnp(spec)
    elif spec.family == "random-regular":
        graph = _random_regular(spec)
    elif spec.family == "complete-self-loop":
        graph = Graph.complete(spec.n, self_loops=True)
    elif spec.family == "complete":
        graph = Graph.complete(spec.n)
    elif spec.family == "complete-bipartite":
        graph = _complete_bipartite(spec)
    elif spec.family == "cycle":
        graph = _cycle(spec.n)
    else:
        assert spec.path is not None
        graph = load_edge_list(spec.path)

    logger.info("graph_generated", family=spec.family, seed=spec.seed, **graph.describe())
    return graph


# === FAMILIES ===

def _gnp(spec: GeneratorSpec) -> Graph:
    p = spec.param
    if p is None or not 0.0 < p <= 1.0:
        raise InvalidParam("gnp needs 0 < p <= 1", p=p)
    n = spec.n
    rng = np.random.default_rng(spec.seed)
    name = f"G({n},{p:.6g})"
    for attempt in range(1, spec.retry_budget + 1):
        rows = []
        for i in range(n - 1):
            hits = np.flatnonzero(rng.random(n - i - 1) < p)
            if hits.size:
                rows.append(np.column_stack([np.full(hits.size, i), hits + i + 1]))
        edges = np.concatenate(rows) if rows else np.empty((0, 2), dtype=np.int64)
        try:
            return Graph.from_edges(n, edges, name=name)
        except InvalidGraph as exc:
            logger.debug("gnp_sample_rejected", attempt=attempt, reason=str(exc))
    raise RetryExhausted(
        "every G(n,p) sample was disconnected", attempts=spec.retry_budget, n=n, p=p
    )


def _check_regular(n: int, d: float | None) -> int:
    if d is None or d != int(d):
        raise InvalidParam("random-regular needs an integer degree d", d=d)
    d = int(d)
    if not 3 <= d <= n / 2:
        raise InvalidParam("random-regular needs 3 <= d <= n/2", n=n, d=d)
    if (n * d) % 2:
        raise InvalidParam("random-regular needs n*d even", n=n, d=d)
    return d


def _random_regular(spec: GeneratorSpec) -> Graph:
    n = spec.n
    d = _check_regular(n, spec.param)
    rng = np.random.default_rng(spec.seed)
    name = f"G({n},d={d})"
    sampler = _pairing_matching if spec.method == "pairing" else _repaired_matching
    for attempt in range(1, spec.retry_budget + 1):
        edges = sampler(n, d, rng)
        if edges is None:
            logger.debug("regular_matching_rejected", attempt=attempt)
            continue
        try:
            return Graph.from_edges(n, edges, name=name)
        except InvalidGraph as exc:
            logger.debug("regular_sample_rejected", attempt=attempt, reason=str(exc))
    raise RetryExhausted(
        "random-regular sampling failed", attempts=spec.retry_budget, n=n, d=d,
        method=spec.method,
    )


def _pairing_matching(n: int, d: int, rng: np.random.Generator) -> np.ndarray | None:
    """One perfect matching of n*d stubs; None on any self-loop or multi-edge."""
    stubs = rng.permutation(np.repeat(np.arange(n, dtype=np.int64), d))
    pairs = np.sort(stubs.reshape(-1, 2), axis=1)
    if np.any(pairs[:, 0] == pairs[:, 1]):
        return None
    if len(np.unique(pairs, axis=0)) != len(pairs):
        return None
    return pairs


def _repaired_matching(n: int, d: int, rng: np.random.Generator) -> np.ndarray | None:
    """Pair stubs, then re-pair only the conflicting ones until none remain."""
    edges: set[tuple[int, int]] = set()
    stubs = list(range(n)) * d

    while stubs:
        potential: dict[int, int] = defaultdict(int)
        rng.shuffle(stubs)
        it = iter(stubs)
        for s1, s2 in zip(it, it):
            if s1 > s2:
                s1, s2 = s2, s1
            if s1 != s2 and (s1, s2) not in edges:
                edges.add((s1, s2))
            else:
                potential[s1] += 1
                potential[s2] += 1

        if not _repairable(edges, potential):
            return None
        stubs = [node for node, count in potential.items() for _ in range(count)]
    return np.array(sorted(edges), dtype=np.int64)


def _repairable(edges: set[tuple[int, int]], potential: dict[int, int]) -> bool:
    if not potential:
        return True
    for s1 in potential:
        for s2 in potential:
            if s1 == s2:
                break
            lo, hi = (s1, s2) if s1 < s2 else (s2, s1)
            if (lo, hi) not in edges:
                return True
    return False


def _complete_bipartite(spec: GeneratorSpec) -> Graph:
    left = int(spec.param) if spec.param is not None else spec.n // 2
    if not 1 <= left < spec.n:
        raise InvalidParam("complete-bipartite needs 1 <= left < n", left=left, n=spec.n)
    a, b = np.meshgrid(np.arange(left), np.arange(left, spec.n), indexing="ij")
    edges = np.column_stack([a.ravel(), b.ravel()])
    return Graph.from_edges(spec.n, edges, name=f"K({left},{spec.n - left})")


def _cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParam("cycle needs n >= 3", n=n)
    v = np.arange(n)
    return Graph.from_edges(n, np.column_stack([v, (v + 1) % n]), name=f"C{n}")
