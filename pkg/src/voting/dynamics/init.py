"""Initial configurations.

Random builders take a numpy Generator; the structured splits (by volume,
by degree, BFS ball) are deterministic and serve as worst-case proxies.
"""

from pathlib import Path
from typing import Optional

import numpy as np
from scipy.sparse.csgraph import breadth_first_order

from src.voting.dynamics.configuration import Configuration
from src.voting.errors import InvalidParam
from src.voting.graph.core import Graph, VertexSet
from src.voting.state.schemas import InitRule

ADVERSARIAL_PROXIES = ("volume-balanced", "high-degree-half", "bfs-ball")


def balanced(g: Graph, rng: np.random.Generator) -> Configuration:
    """A uniformly random set of floor(n/2) vertices."""
    chosen = rng.permutation(g.n)[: g.n // 2]
    return Configuration.of(g, VertexSet.from_indices(g.n, chosen))


def fraction(g: Graph, delta0: float, rng: np.random.Generator) -> Configuration:
    """Random vertices added until pi(A) >= (1 + delta0) / 2."""
    if not -1.0 <= delta0 <= 1.0:
        raise InvalidParam("delta0 must lie in [-1, 1]", delta0=delta0)
    target = (1.0 + delta0) / 2.0
    if target <= 0.0:
        return Configuration.of(g, VertexSet.empty(g.n))
    order = rng.permutation(g.n)
    mass = np.cumsum(g.distribution.pi[order])
    take = min(int(np.searchsorted(mass, target - 1e-15)) + 1, g.n)
    return Configuration.of(g, VertexSet.from_indices(g.n, order[:take]))


def volume_balanced(g: Graph) -> Configuration:
    """Greedy split by degree: each vertex, heaviest first, joins the lighter side."""
    order = np.argsort(-g.deg, kind="stable")
    mask = np.zeros(g.n, dtype=bool)
    vol_a = vol_b = 0
    for v in order:
        if vol_a <= vol_b:
            mask[v] = True
            vol_a += int(g.deg[v])
        else:
            vol_b += int(g.deg[v])
    return Configuration.of(g, VertexSet(mask))


def high_degree_half(g: Graph) -> Configuration:
    order = np.argsort(-g.deg, kind="stable")
    return Configuration.of(g, VertexSet.from_indices(g.n, order[: g.n // 2]))


def bfs_ball(g: Graph, root: int = 0) -> Configuration:
    """BFS order from ``root`` until the ball holds half of the volume."""
    order = breadth_first_order(g.adjacency, root, directed=False, return_predecessors=False)
    mass = np.cumsum(g.distribution.pi[order])
    take = min(int(np.searchsorted(mass, 0.5 - 1e-15)) + 1, g.n)
    return Configuration.of(g, VertexSet.from_indices(g.n, order[:take]))


def from_file(g: Graph, path: str | Path) -> Configuration:
    """Whitespace-separated opinion-0 vertex ids; ``#`` starts a comment."""
    ids: list[int] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        body = line.split("#", 1)[0]
        ids.extend(int(tok) for tok in body.split())
    return Configuration.of(g, VertexSet.from_indices(g.n, ids))


def build_init(
    g: Graph, rule: InitRule, rng: np.random.Generator, proxy: Optional[str] = None
) -> Configuration:
    """Configuration for ``rule``; ``proxy`` picks the split of an adversarial rule."""
    kind = proxy if rule.kind == "adversarial" else rule.kind
    match kind:
        case "balanced":
            return balanced(g, rng)
        case "fraction":
            if rule.delta0 is None:
                raise InvalidParam("fraction init needs delta0")
            return fraction(g, rule.delta0, rng)
        case "volume-balanced":
            return volume_balanced(g)
        case "high-degree-half":
            return high_degree_half(g)
        case "bfs-ball":
            return bfs_ball(g)
        case "file":
            if rule.path is None:
                raise InvalidParam("file init needs path")
            return from_file(g, rule.path)
        case _:
            raise InvalidParam("adversarial init needs a proxy", proxy=proxy)
