"""
Shared fixtures for the test suite.
"""

import random
from typing import Callable

import pytest

from exciton_invariants.core.config import Settings
from exciton_invariants.core.graph import Graph, Permutation
from exciton_invariants.fixtures import load_cospectral24_pair


@pytest.fixture
def settings():
    """Default settings, independent of the environment."""
    return Settings()


@pytest.fixture
def star():
    """Star with centre 5: cospectral with four_cycle at level 1 only."""
    return Graph.from_edges(5, [(1, 5), (2, 5), (3, 5), (4, 5)])


@pytest.fixture
def four_cycle():
    """4-cycle on 1..4 plus the isolated vertex 5."""
    return Graph.from_edges(5, [(1, 2), (2, 3), (3, 4), (1, 4)])


@pytest.fixture
def path3():
    """Path 1 - 2 - 3."""
    return Graph.from_edges(3, [(1, 2), (2, 3)])


@pytest.fixture(scope="session")
def cospectral24_pair():
    """The bundled 24-vertex pair that first differs at level 3."""
    return load_cospectral24_pair()


@pytest.fixture
def rng():
    """Seeded generator so property tests are deterministic."""
    return random.Random(20240917)


@pytest.fixture
def random_graph() -> Callable[[random.Random, int, float], Graph]:
    """Factory for G(N, p) random graphs."""

    def make(rng: random.Random, n_vertices: int, density: float = 0.5) -> Graph:
        edges = [
            (i, j)
            for i in range(1, n_vertices + 1)
            for j in range(i + 1, n_vertices + 1)
            if rng.random() < density
        ]
        return Graph(n_vertices, edges)

    return make


@pytest.fixture
def random_permutation() -> Callable[[random.Random, int], Permutation]:
    """Factory for uniformly random permutations."""

    def make(rng: random.Random, size: int) -> Permutation:
        images = list(range(1, size + 1))
        rng.shuffle(images)
        return Permutation(images)

    return make
