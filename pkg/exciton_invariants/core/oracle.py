"""
Independent checks for the invariant machinery.

Two oracles live here. The first is an exhaustive isomorphism search. The
second builds the exchange Hamiltonian sum over edges {i, j} of
(S+_i S-_j + S-_i S+_j) by acting on qubit basis states, with the coupling
normalised to 1. Its n-excitation block has to match the combinatorial
level-n matrix, but it is assembled without the symmetric-difference rule.

Basis states are bitmasks: bit v - 1 is set when qubit v is excited.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
import scipy.sparse

from exciton_invariants.core.config import Settings, resolve_settings
from exciton_invariants.core.errors import GuardLimitError
from exciton_invariants.core.exciton import level_matrix
from exciton_invariants.core.graph import (
    Graph,
    Permutation,
    SymmetricIntMatrix,
    degree_sequence,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IsomorphismResult:
    """
    Outcome of the exhaustive search.

    Attributes:
        witness (Optional[Permutation]): p with apply_permutation(g2, p) == g1,
            or None when the graphs are not isomorphic
    """

    witness: Optional[Permutation]

    @property
    def is_isomorphic(self) -> bool:
        return self.witness is not None

    @property
    def outcome(self) -> str:
        return "Isomorphic" if self.is_isomorphic else "NonIsomorphic"


@dataclass(frozen=True)
class HamiltonianBlock:
    """
    One excitation-number block of the exchange Hamiltonian.

    Attributes:
        level (int): Number of excited qubits n
        basis (Tuple[Tuple[int, ...], ...]): Excited-qubit sets, lexicographic
        matrix (SymmetricIntMatrix): <S'|H|S> over the basis
    """

    level: int
    basis: Tuple[Tuple[int, ...], ...]
    matrix: SymmetricIntMatrix


def _guard(value: int, limit: int, what: str) -> None:
    if value > limit:
        raise GuardLimitError(f"{what} is limited to {limit} vertices, got {value}", limit, value)


def brute_force_isomorphic(
    g1: Graph, g2: Graph, settings: Optional[Settings] = None
) -> IsomorphismResult:
    """
    Exhaustive relabelling search with degree and adjacency pruning.

    Vertices of g2 are assigned targets in g1 in order 1..N, each trying
    targets in increasing order, so the witness found first is the
    lexicographically least one.

    Raises:
        ValueError: If the vertex counts differ
        GuardLimitError: If N exceeds settings.brute_force_max_vertices
    """
    settings = resolve_settings(settings)
    if g1.n_vertices != g2.n_vertices:
        raise ValueError(
            f"Graphs have different vertex counts: {g1.n_vertices} and {g2.n_vertices}"
        )
    n = g1.n_vertices
    _guard(n, settings.brute_force_max_vertices, "Brute-force isomorphism search")

    if g1.edge_count != g2.edge_count or degree_sequence(g1) != degree_sequence(g2):
        return IsomorphismResult(None)

    targets_by_degree: Dict[int, List[int]] = {}
    for v in g1.vertices():
        targets_by_degree.setdefault(g1.degree(v), []).append(v)

    images = [0] * (n + 1)
    used = [False] * (n + 1)

    def extend(v: int) -> bool:
        if v > n:
            return True
        for target in targets_by_degree.get(g2.degree(v), []):
            if used[target]:
                continue
            if any(g2.has_edge(u, v) != g1.has_edge(images[u], target) for u in range(1, v)):
                continue
            images[v] = target
            used[target] = True
            if extend(v + 1):
                return True
            used[target] = False
        return False

    if not extend(1):
        return IsomorphismResult(None)

    return IsomorphismResult(Permutation(images[1:]))


def _excited(state: int, n_vertices: int) -> Tuple[int, ...]:
    return tuple(v for v in range(1, n_vertices + 1) if state >> (v - 1) & 1)


def _hopping_terms(g: Graph, state: int) -> List[int]:
    """States reached from |state> by each edge term of the exchange Hamiltonian."""
    reached = []
    for i, j in g.sorted_edges():
        bit_i, bit_j = 1 << (i - 1), 1 << (j - 1)
        # S+_i S-_j: lower j, raise i
        if state & bit_j and not state & bit_i:
            reached.append(state ^ bit_i ^ bit_j)
        # S-_i S+_j: lower i, raise j
        if state & bit_i and not state & bit_j:
            reached.append(state ^ bit_i ^ bit_j)
    return reached


def exciton_block(g: Graph, n: int, settings: Optional[Settings] = None) -> HamiltonianBlock:
    """
    The n-excitation block, built from operator action on basis states.

    Entry (S', S) counts the edge terms mapping |S> to |S'>.

    Raises:
        ValueError: If n is outside 0..N
        GuardLimitError: If N exceeds settings.oracle_max_vertices
    """
    settings = resolve_settings(settings)
    _guard(g.n_vertices, settings.oracle_max_vertices, "Physics-route exciton blocks")
    if not 0 <= n <= g.n_vertices:
        raise ValueError(f"Level {n} is outside 0..{g.n_vertices}")

    states = [s for s in range(1 << g.n_vertices) if bin(s).count("1") == n]
    states.sort(key=lambda s: _excited(s, g.n_vertices))
    position = {state: k for k, state in enumerate(states)}

    matrix = np.zeros((len(states), len(states)), dtype=np.int64)
    for state in states:
        for target in _hopping_terms(g, state):
            matrix[position[target], position[state]] += 1

    basis = tuple(_excited(s, g.n_vertices) for s in states)
    return HamiltonianBlock(n, basis, matrix)


def verify_block_equivalence(g: Graph, n: int, settings: Optional[Settings] = None) -> bool:
    """True iff the physics-route block equals level_matrix(g, n) entrywise."""
    block = exciton_block(g, n, settings)
    return bool(np.array_equal(block.matrix, level_matrix(g, n, settings).base))


def full_hamiltonian(g: Graph, settings: Optional[Settings] = None) -> scipy.sparse.coo_matrix:
    """
    Exchange Hamiltonian on all 2^N basis states, assembled from a triple list.

    Raises:
        GuardLimitError: If N exceeds settings.hamiltonian_max_vertices
    """
    settings = resolve_settings(settings)
    _guard(g.n_vertices, settings.hamiltonian_max_vertices, "The full Hamiltonian")
    size = 1 << g.n_vertices
    rows: List[int] = []
    cols: List[int] = []
    for state in range(size):
        for target in _hopping_terms(g, state):
            rows.append(target)
            cols.append(state)
    data = np.ones(len(rows), dtype=np.int64)
    return scipy.sparse.coo_matrix((data, (rows, cols)), shape=(size, size))


def verify_excitation_conservation(g: Graph, settings: Optional[Settings] = None) -> bool:
    """
    Reorder the 2^N basis by excitation count and check the Hamiltonian is
    block diagonal, each block equal to exciton_block(g, n).
    """
    settings = resolve_settings(settings)
    hamiltonian = full_hamiltonian(g, settings).tocsr()
    n_vertices = g.n_vertices

    order = sorted(
        range(1 << n_vertices),
        key=lambda s: (bin(s).count("1"), _excited(s, n_vertices)),
    )
    reordered = hamiltonian[order, :][:, order].toarray()

    offsets = [0]
    for n in range(n_vertices + 1):
        offsets.append(offsets[-1] + math.comb(n_vertices, n))

    inside = np.zeros_like(reordered, dtype=bool)
    for n in range(n_vertices + 1):
        lo, hi = offsets[n], offsets[n + 1]
        inside[lo:hi, lo:hi] = True
        if not np.array_equal(reordered[lo:hi, lo:hi], exciton_block(g, n, settings).matrix):
            logger.debug("Block %d of the full Hamiltonian disagrees with exciton_block", n)
            return False

    leaked = int(np.count_nonzero(reordered[~inside]))
    if leaked:
        logger.debug("%d Hamiltonian entries couple different excitation numbers", leaked)
    return leaked == 0


def all_graphs(n_vertices: int) -> Iterator[Graph]:
    """Every labelled graph on n_vertices vertices, one per subset of vertex pairs."""
    pairs = list(itertools.combinations(range(1, n_vertices + 1), 2))
    for mask in range(1 << len(pairs)):
        yield Graph(n_vertices, (pair for bit, pair in enumerate(pairs) if mask >> bit & 1))
