import math

import numpy as np
import pytest

from src.voting.errors import InvalidGraph
from src.voting.graph.core import (
    Graph,
    VertexSet,
    bias,
    deg_in,
    edge_measure_Q,
    pi2_measure,
    pi_measure,
    q_h,
    r_h,
    transition_probability,
    transition_vector,
    weighted_walk_deviation,
)
from src.voting.graph.edgelist import format_edge_list, load_edge_list, parse_edge_list, save_edge_list


def vs(n, *ids):
    return VertexSet.from_indices(n, ids)


# === CONSTRUCTION ===

def test_from_edges_degrees_and_volume(path3):
    assert path3.deg.tolist() == [1, 2, 1]
    assert path3.volume == 4
    assert path3.num_edges == 2


def test_self_loop_counts_once_in_degree():
    g = Graph.complete(3, self_loops=True)
    assert g.deg.tolist() == [3, 3, 3]
    assert g.num_loops == 3
    assert g.volume == 9
    assert 0 in g.neighbors(0)


@pytest.mark.parametrize(
    "n,edges",
    [
        (3, [(0, 1)]),  # isolated vertex 2
        (4, [(0, 1), (2, 3)]),  # two components
        (2, [(0, 1), (1, 0)]),  # multi-edge
        (2, [(0, 2)]),  # out of range
    ],
)
def test_invalid_graphs_rejected(n, edges):
    with pytest.raises(InvalidGraph):
        Graph.from_edges(n, edges)


def test_graph_arrays_are_read_only(triangle):
    with pytest.raises(ValueError):
        triangle.deg[0] = 7


def test_distribution_sums_to_one_and_norms(path3):
    dist = path3.distribution
    assert math.fsum(dist.pi) == pytest.approx(1.0, abs=1e-12)
    assert dist.pi.tolist() == [0.25, 0.5, 0.25]
    assert dist.norm2 == pytest.approx(math.sqrt(0.375))
    assert dist.norm(3) == pytest.approx(dist.norm3)


def test_regular_graph_pi_uniform(k5):
    assert k5.is_regular()
    assert np.allclose(k5.distribution.pi, 0.2)
    assert k5.distribution.norm2 == pytest.approx(1 / math.sqrt(5))


# === MEASURES ===

def test_transition_probability_examples(triangle, path3):
    assert transition_probability(triangle, 0, vs(3, 1, 2)) == 1.0
    assert transition_probability(triangle, 0, VertexSet.empty(3)) == 0.0
    assert transition_probability(path3, 1, vs(3, 0)) == 0.5


def test_transition_vector_matches_scalar(gnp_256, rng):
    s = VertexSet(rng.random(256) < 0.4)
    vec = transition_vector(gnp_256, s)
    for v in (0, 17, 101, 255):
        assert vec[v] == transition_probability(gnp_256, v, s)


def test_deg_in_counts_neighbors(path3):
    assert deg_in(path3, vs(3, 0, 2)).tolist() == [0, 2, 0]


def test_edge_measure_examples(triangle, gnp_256):
    full = VertexSet.full(256)
    assert edge_measure_Q(gnp_256, full, full) == 1.0
    assert edge_measure_Q(gnp_256, full, VertexSet.empty(256)) == 0.0
    assert edge_measure_Q(triangle, vs(3, 0), vs(3, 1)) == pytest.approx(1 / 6)


def test_q_h_examples(triangle, gnp_256, rng):
    s = VertexSet(rng.random(256) < 0.5)
    t = VertexSet(rng.random(256) < 0.3)
    assert q_h(gnp_256, s, t, lambda x: x) == pytest.approx(edge_measure_Q(gnp_256, s, t), abs=1e-12)
    assert q_h(triangle, VertexSet.full(3), vs(3, 1), lambda x: np.ones_like(x)) == pytest.approx(1.0)
    assert q_h(triangle, VertexSet.full(3), vs(3, 0), lambda x: x**2) == pytest.approx(1 / 6)


def test_r_h_examples(triangle, gnp_256):
    full = VertexSet.full(256)
    norm_sq = gnp_256.distribution.norm2**2
    assert r_h(gnp_256, full, full, lambda x: np.ones_like(x)) == pytest.approx(norm_sq)
    assert r_h(gnp_256, full, full, lambda x: x) == pytest.approx(norm_sq)
    assert r_h(triangle, VertexSet.full(3), vs(3, 0), lambda x: x) == pytest.approx(1 / 9)


def test_q_is_reversible(gnp_256):
    rng = np.random.default_rng(3)
    for _ in range(50):
        s = VertexSet(rng.random(256) < rng.random())
        t = VertexSet(rng.random(256) < rng.random())
        assert abs(edge_measure_Q(gnp_256, s, t) - edge_measure_Q(gnp_256, t, s)) <= 1e-12


def test_pi_measures_and_bias(path3):
    s = vs(3, 1)
    assert pi_measure(path3, s) == 0.5
    assert pi2_measure(path3, s) == 0.25
    assert bias(path3, s) == 0.0
    assert bias(path3, VertexSet.full(3)) == 1.0


def test_weighted_walk_deviation_zero_on_complete_with_loops():
    g = Graph.complete(6, self_loops=True)
    assert weighted_walk_deviation(g, vs(6, 0, 1, 2)) == pytest.approx(0.0, abs=1e-15)


def test_vertex_set_helpers():
    s = vs(5, 1, 3)
    assert len(s) == 2
    assert s.complement().indices().tolist() == [0, 2, 4]
    assert VertexSet.empty(4).is_empty()
    assert VertexSet.full(4).is_full()
    with pytest.raises(ValueError):
        vs(3, 5)


# === EDGE LISTS ===

def test_edge_list_round_trip(tmp_path, gnp_256):
    path = save_edge_list(gnp_256, tmp_path / "g.txt")
    loaded = load_edge_list(path)
    assert loaded.n == gnp_256.n
    assert np.array_equal(loaded.edges, gnp_256.edges)


def test_edge_list_header_and_comments():
    g = parse_edge_list("# n=3\n0 1  # first\n\n1 2\n2 2\n")
    assert g.n == 3
    assert g.num_loops == 1
    assert format_edge_list(g).startswith("# n=3")


@pytest.mark.parametrize("text", ["", "0 1 2\n", "a b\n", "# n=3\n0 1\n"])
def test_edge_list_errors(text):
    with pytest.raises(InvalidGraph):
        parse_edge_list(text)
