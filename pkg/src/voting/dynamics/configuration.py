"""Opinion configurations: the set A of opinion-0 holders with pi(A) and delta(A)."""

from dataclasses import dataclass

import numpy as np

from src.voting.graph.core import Graph, VertexSet, pi_measure


@dataclass(frozen=True, eq=False)
class Configuration:
    a: VertexSet
    pi_a: float

    @property
    def delta(self) -> float:
        return 2.0 * self.pi_a - 1.0

    @property
    def n(self) -> int:
        return self.a.n

    @property
    def minority(self) -> float:
        """min(pi(A), pi(B))."""
        return min(self.pi_a, 1.0 - self.pi_a)

    def is_consensus(self) -> bool:
        return self.a.is_empty() or self.a.is_full()

    def complement(self, g: Graph) -> "Configuration":
        return Configuration.of(g, self.a.complement())

    @classmethod
    def of(cls, g: Graph, a: VertexSet) -> "Configuration":
        if a.n != g.n:
            raise ValueError(f"vertex set has size {a.n}, graph has {g.n} vertices")
        if a.is_empty():
            return cls(a, 0.0)
        if a.is_full():
            return cls(a, 1.0)
        return cls(a, pi_measure(g, a))

    @classmethod
    def from_mask(cls, g: Graph, mask: np.ndarray) -> "Configuration":
        return cls.of(g, VertexSet(np.array(mask, dtype=bool)))
