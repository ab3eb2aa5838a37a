"""Graph core: immutable graphs, the degree distribution and walk measures.

All measures are pure functions of (graph, sets). Sums run in ascending
vertex order through ``math.fsum`` so results are bit-identical across
platforms. A self-loop at v adds 1 to deg(v) and puts v in N(v); the
normalizer of pi is the volume sum(deg), which is 2|E| on loop-free graphs.

Edge weights would enter only through ``adjacency`` data and ``deg``
(P(u, v) = w(u, v) / sum_x w(u, x)); the measures below already read both
from there.
"""

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from src.voting.errors import InvalidGraph

RealFunction = Callable[[np.ndarray], np.ndarray]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected connected graph with optional self-loops.

    Construct with ``Graph.from_edges``; the fields are read-only views.
    """

    n: int
    edges: np.ndarray  # (m, 2), u <= v, lexicographically sorted
    adjacency: sparse.csr_array  # 0/1 entries, sorted column indices per row
    deg: np.ndarray
    name: str = field(default="graph")

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]] | np.ndarray,
        *,
        name: str = "graph",
        require_connected: bool = True,
    ) -> "Graph":
        if n < 1:
            raise InvalidGraph("graph needs at least one vertex", n=n)
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64).reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise InvalidGraph("edge endpoint out of range", n=n)
        arr = np.sort(arr, axis=1)
        order = np.lexsort((arr[:, 1], arr[:, 0]))
        arr = arr[order]
        if len(arr) > 1 and np.any(np.all(arr[1:] == arr[:-1], axis=1)):
            raise InvalidGraph("multi-edges are not supported", n=n)

        loops = arr[:, 0] == arr[:, 1]
        rows = np.concatenate([arr[:, 0], arr[~loops, 1]])
        cols = np.concatenate([arr[:, 1], arr[~loops, 0]])
        data = np.ones(len(rows), dtype=np.int64)
        adjacency = sparse.csr_array((data, (rows, cols)), shape=(n, n))
        adjacency.sort_indices()
        deg = np.diff(adjacency.indptr).astype(np.int64)

        if np.any(deg < 1):
            raise InvalidGraph(
                "every vertex needs degree >= 1", isolated=int(np.sum(deg < 1)), n=n
            )
        graph = cls(n=n, edges=_readonly(arr), adjacency=adjacency, deg=_readonly(deg), name=name)
        if require_connected and not graph.is_connected():
            raise InvalidGraph("graph is disconnected", n=n, name=name)
        return graph

    @classmethod
    def complete(cls, n: int, *, self_loops: bool = False) -> "Graph":
        iu, ju = np.triu_indices(n, k=0 if self_loops else 1)
        name = f"K{n}+loops" if self_loops else f"K{n}"
        return cls.from_edges(n, np.column_stack([iu, ju]), name=name)

    # --- structure ---
    @property
    def num_edges(self) -> int:
        return int(len(self.edges))

    @property
    def num_loops(self) -> int:
        return int(np.sum(self.edges[:, 0] == self.edges[:, 1]))

    @property
    def volume(self) -> int:
        """sum(deg): each non-loop edge counts twice, each self-loop once."""
        return int(self.deg.sum())

    @property
    def max_degree(self) -> int:
        return int(self.deg.max())

    @property
    def average_degree(self) -> float:
        return self.volume / self.n

    def is_regular(self) -> bool:
        return bool(np.all(self.deg == self.deg[0]))

    def neighbors(self, v: int) -> np.ndarray:
        return self.adjacency.indices[self.adjacency.indptr[v]:self.adjacency.indptr[v + 1]]

    def is_connected(self) -> bool:
        count, _ = connected_components(self.adjacency, directed=False)
        return bool(count == 1)

    def to_edge_list(self) -> list[tuple[int, int]]:
        return [(int(u), int(v)) for u, v in self.edges]

    @cached_property
    def distribution(self) -> "DegreeDistribution":
        return degree_distribution(self)

    def describe(self) -> dict[str, object]:
        return {"name": self.name, "n": self.n, "edges": self.num_edges, "loops": self.num_loops}


@dataclass(frozen=True, eq=False)
class DegreeDistribution:
    """pi(v) = deg(v) / volume with its l2/l3 norms."""

    pi: np.ndarray
    norm2: float
    norm3: float
    pi2_total: float  # sum pi(v)^2 == norm2 ** 2
    pi3_total: float  # sum pi(v)^3; norm3 ** (3/2) in the bounds is sqrt of this

    def norm(self, p: float) -> float:
        return math.fsum(self.pi**p) ** (1.0 / p)


def degree_distribution(g: Graph) -> DegreeDistribution:
    pi = _readonly(g.deg / g.volume)
    pi2_total = math.fsum(pi**2)
    pi3_total = math.fsum(pi**3)
    return DegreeDistribution(
        pi=pi,
        norm2=math.sqrt(pi2_total),
        norm3=pi3_total ** (1.0 / 3.0),
        pi2_total=pi2_total,
        pi3_total=pi3_total,
    )


@dataclass(frozen=True, eq=False)
class VertexSet:
    """Subset of V as a read-only boolean membership vector."""

    mask: np.ndarray

    def __post_init__(self) -> None:
        if self.mask.dtype != np.bool_:
            raise TypeError("VertexSet mask must be boolean")
        if self.mask.flags.writeable:
            _readonly(self.mask)

    @cached_property
    def cardinality(self) -> int:
        return int(np.count_nonzero(self.mask))

    def __len__(self) -> int:
        return self.cardinality

    def __contains__(self, v: int) -> bool:
        return bool(self.mask[v])

    @property
    def n(self) -> int:
        return int(self.mask.shape[0])

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "VertexSet":
        mask = np.zeros(n, dtype=bool)
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise ValueError("vertex index out of range")
        mask[idx] = True
        return cls(mask)

    @classmethod
    def empty(cls, n: int) -> "VertexSet":
        return cls(np.zeros(n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls(np.ones(n, dtype=bool))

    def complement(self) -> "VertexSet":
        return VertexSet(~self.mask)

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def is_empty(self) -> bool:
        return self.cardinality == 0

    def is_full(self) -> bool:
        return self.cardinality == self.n


# === MEASURES ===

def deg_in(g: Graph, s: VertexSet) -> np.ndarray:
    """deg_S(v) = |N(v) ∩ S| for every v, as exact integers."""
    return np.asarray(g.adjacency @ s.mask.astype(np.int64), dtype=np.int64)


def transition_probability(g: Graph, v: int, s: VertexSet) -> float:
    """P(v, S) = deg_S(v) / deg(v)."""
    count = int(np.count_nonzero(s.mask[g.neighbors(v)]))
    return count / int(g.deg[v])


def transition_vector(g: Graph, s: VertexSet) -> np.ndarray:
    """P(v, S) for all v; same rounding as ``transition_probability``."""
    return deg_in(g, s) / g.deg


def pi_measure(g: Graph, s: VertexSet) -> float:
    return math.fsum(g.distribution.pi[s.mask])


def pi2_measure(g: Graph, s: VertexSet) -> float:
    """pi_2(S) = sum over S of pi(v)^2."""
    return math.fsum(g.distribution.pi[s.mask] ** 2)


def bias(g: Graph, s: VertexSet) -> float:
    """delta(S) = pi(S) - pi(V minus S) = 2 pi(S) - 1."""
    return 2.0 * pi_measure(g, s) - 1.0


def edge_measure_Q(g: Graph, s: VertexSet, t: VertexSet) -> float:
    """Q(S, T) = sum_{v in S} pi(v) P(v, T), computed as (S->T endpoints) / volume."""
    crossing = int(deg_in(g, t)[s.mask].sum())
    return crossing / g.volume


def q_h(g: Graph, s: VertexSet, t: VertexSet, h: RealFunction) -> float:
    """Q_h(S, T) = sum_{v in S} pi(v) h(P(v, T))."""
    values = np.asarray(h(transition_vector(g, t)[s.mask]), dtype=np.float64)
    return math.fsum(g.distribution.pi[s.mask] * values)


def r_h(g: Graph, s: VertexSet, t: VertexSet, h: RealFunction) -> float:
    """R_h(S, T) = sum_{v in S} pi(v)^2 h(P(v, T))."""
    values = np.asarray(h(transition_vector(g, t)[s.mask]), dtype=np.float64)
    return math.fsum(g.distribution.pi[s.mask] ** 2 * values)


def weighted_walk_deviation(g: Graph, s: VertexSet) -> float:
    """sum_v pi(v) (P(v, S) - pi(S))^2."""
    centered = transition_vector(g, s) - pi_measure(g, s)
    return math.fsum(g.distribution.pi * centered**2)
