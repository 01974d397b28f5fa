"""
Unit tests for the brute-force isomorphism search and the physics-route blocks.
"""

import math

import numpy as np
import pytest

from exciton_invariants.core.config import Settings
from exciton_invariants.core.errors import GuardLimitError
from exciton_invariants.core.exciton import level_matrix
from exciton_invariants.core.graph import Graph, Permutation, apply_permutation
from exciton_invariants.core.oracle import (
    all_graphs,
    brute_force_isomorphic,
    exciton_block,
    full_hamiltonian,
    verify_block_equivalence,
    verify_excitation_conservation,
)
from exciton_invariants.core.spectral import compare_spectra, default_tolerance, spectrum


class TestBruteForce:
    """Tests for brute_force_isomorphic."""

    def test_relabelled_graph_is_isomorphic(self, rng, random_graph, random_permutation):
        """Test the witness maps the second graph back onto the first."""
        for _ in range(30):
            g = random_graph(rng, rng.randint(1, 8))
            h = apply_permutation(g, random_permutation(rng, g.n_vertices))
            result = brute_force_isomorphic(g, h)

            assert result.is_isomorphic
            assert result.outcome == "Isomorphic"
            assert apply_permutation(h, result.witness) == g

    def test_cospectral_pair_not_isomorphic(self, star, four_cycle):
        """Test the 5-vertex pair is NonIsomorphic."""
        result = brute_force_isomorphic(star, four_cycle)

        assert not result.is_isomorphic
        assert result.witness is None
        assert result.outcome == "NonIsomorphic"

    def test_same_degrees_not_isomorphic(self):
        """Test a hexagon against two triangles, both 2-regular."""
        hexagon = Graph(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 6)])
        triangles = Graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])

        assert not brute_force_isomorphic(hexagon, triangles).is_isomorphic

    def test_lexicographically_least_witness(self, path3):
        """Test the first witness found is the smallest image sequence."""
        result = brute_force_isomorphic(path3, path3)

        assert result.witness == Permutation([1, 2, 3])

    def test_vertex_count_mismatch(self, star):
        """Test graphs of different order raise ValueError."""
        with pytest.raises(ValueError, match="different vertex counts"):
            brute_force_isomorphic(star, Graph.empty(4))

    def test_guard(self):
        """Test the vertex guard."""
        with pytest.raises(GuardLimitError) as excinfo:
            brute_force_isomorphic(Graph.empty(11), Graph.empty(11), Settings())

        assert excinfo.value.limit == 10

    def test_soundness_of_invariants(self, rng, random_graph, random_permutation):
        """Test that no differing invariant ever meets an isomorphic pair."""
        violations = 0
        isomorphic_pairs = 0
        for trial in range(500):
            n_vertices = rng.randint(2, 8)
            density = rng.random()
            g1 = random_graph(rng, n_vertices, density)
            if trial % 2:
                g2 = apply_permutation(g1, random_permutation(rng, n_vertices))
            else:
                g2 = random_graph(rng, n_vertices, density)

            differs = False
            for n in range(1, n_vertices // 2 + 1):
                m1, m2 = level_matrix(g1, n).base, level_matrix(g2, n).base
                tol = max(default_tolerance(m1), default_tolerance(m2))
                if not compare_spectra(spectrum(m1), spectrum(m2), tol).is_equal:
                    differs = True
                    break

            isomorphic = brute_force_isomorphic(g1, g2).is_isomorphic
            isomorphic_pairs += isomorphic
            if differs and isomorphic:
                violations += 1

        assert violations == 0
        assert isomorphic_pairs >= 250


class TestExcitonBlock:
    """Tests for the operator-action construction."""

    def test_star_level_two(self, star):
        """Test the bi-exciton block of the star equals its level-2 matrix."""
        block = exciton_block(star, 2)

        assert block.basis[:3] == ((1, 2), (1, 3), (1, 4))
        assert np.array_equal(block.matrix, level_matrix(star, 2).base)
        assert verify_block_equivalence(star, 2)

    @pytest.mark.slow
    def test_exhaustive_up_to_six_vertices(self):
        """Test block equivalence for every graph on at most 6 vertices at n = 1, 2, 3."""
        for n_vertices in range(1, 7):
            for g in all_graphs(n_vertices):
                for n in range(1, min(3, n_vertices) + 1):
                    assert verify_block_equivalence(g, n)

    def test_random_larger_graphs(self, rng, random_graph):
        """Test block equivalence at n = 2 for 50 random graphs with 7 to 12 vertices."""
        for _ in range(50):
            g = random_graph(rng, rng.randint(7, 12))
            assert verify_block_equivalence(g, 2)

    def test_level_out_of_range(self, star):
        """Test n > N raises ValueError."""
        with pytest.raises(ValueError, match="outside 0..5"):
            exciton_block(star, 6)

    def test_guard(self):
        """Test the oracle vertex guard."""
        with pytest.raises(GuardLimitError):
            exciton_block(Graph.empty(15), 1, Settings())


class TestFullHamiltonian:
    """Tests for the 2^N exchange Hamiltonian."""

    def test_shape_and_symmetry(self, path3):
        """Test the sparse Hamiltonian is 2^N square and symmetric."""
        hamiltonian = full_hamiltonian(path3).toarray()

        assert hamiltonian.shape == (8, 8)
        assert np.array_equal(hamiltonian, hamiltonian.T)
        # an edge acts on the 2^(N-1) states with exactly one endpoint excited
        assert hamiltonian.sum() == path3.edge_count * 2 ** (3 - 1)

    def test_single_excitation_hop(self):
        """Test |1 excited> couples to |2 excited> across the only edge."""
        hamiltonian = full_hamiltonian(Graph(2, [(1, 2)])).toarray()

        assert hamiltonian[0b10, 0b01] == 1
        assert hamiltonian[0b01, 0b10] == 1
        assert hamiltonian[0b11, 0b11] == 0

    def test_conservation(self, star, four_cycle, rng, random_graph):
        """Test the Hamiltonian is block diagonal by excitation number."""
        for g in (star, four_cycle, random_graph(rng, 7), Graph.complete(6)):
            assert verify_excitation_conservation(g)

    def test_guard(self):
        """Test the full-Hamiltonian vertex guard."""
        with pytest.raises(GuardLimitError):
            full_hamiltonian(Graph.empty(9), Settings())


def test_all_graphs_counts():
    """Test all_graphs enumerates 2^C(N,2) labelled graphs."""
    for n_vertices in range(1, 5):
        assert sum(1 for _ in all_graphs(n_vertices)) == 2 ** math.comb(n_vertices, 2)
