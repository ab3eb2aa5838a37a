"""Graphs, measures, generators and the expansion parameter."""

from src.voting.graph.core import (
    DegreeDistribution,
    Graph,
    VertexSet,
    bias,
    deg_in,
    degree_distribution,
    edge_measure_Q,
    pi2_measure,
    pi_measure,
    q_h,
    r_h,
    transition_probability,
    transition_vector,
    weighted_walk_deviation,
)
from src.voting.graph.edgelist import load_edge_list, parse_edge_list, save_edge_list
from src.voting.graph.generators import GeneratorSpec, derive_seed, generate
from src.voting.graph.spectral import expansion, expected_gnp_lambda

__all__ = [
    "DegreeDistribution",
    "Graph",
    "VertexSet",
    "bias",
    "deg_in",
    "degree_distribution",
    "edge_measure_Q",
    "pi2_measure",
    "pi_measure",
    "q_h",
    "r_h",
    "transition_probability",
    "transition_vector",
    "weighted_walk_deviation",
    "load_edge_list",
    "parse_edge_list",
    "save_edge_list",
    "GeneratorSpec",
    "derive_seed",
    "generate",
    "expansion",
    "expected_gnp_lambda",
]
