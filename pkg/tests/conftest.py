"""Shared fixtures: small hand-checkable graphs, seeded samples, specs."""

import numpy as np
import pytest

from src.voting.graph.core import Graph
from src.voting.graph.generators import GeneratorSpec, generate
from src.voting.kernels import betrayal as bt
from src.voting.utils.logging_config import configure_logging

configure_logging("WARNING")

MASTER_SEED = 20240601


@pytest.fixture
def triangle() -> Graph:
    return Graph.complete(3)


@pytest.fixture
def k5() -> Graph:
    return Graph.complete(5)


@pytest.fixture
def path3() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2)], name="P3")


@pytest.fixture
def k200_loops() -> Graph:
    return Graph.complete(200, self_loops=True)


@pytest.fixture(scope="session")
def gnp_256() -> Graph:
    return generate(GeneratorSpec(family="gnp", n=256, param=0.3, seed=MASTER_SEED))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(MASTER_SEED)


@pytest.fixture
def best_of_two():
    return bt.best_of(2)


@pytest.fixture
def best_of_three():
    return bt.best_of(3)
