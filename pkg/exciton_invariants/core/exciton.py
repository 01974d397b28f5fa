"""
Level-n exciton matrices.

Rows and columns of the level-n matrix G^(n) are the n-subsets S of the vertex
set in lexicographic order. Entry (S, S') is G[a, b] when the symmetric
difference of S and S' is exactly {a, b}, and 0 otherwise. At n = 1 this is
the adjacency matrix; at n = 2 it is the bi-exciton block, whose ordering
|12>, |13>, ..., |1N>, |23>, ... matches the pair indexing tableau.

The Laplacian flavour negates the off-diagonal entries and puts the edge
boundary of S on the diagonal, reducing to D - A at n = 1.
"""

import itertools
import logging
import math
import time
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from exciton_invariants.core.config import Settings, resolve_settings
from exciton_invariants.core.errors import GuardLimitError
from exciton_invariants.core.graph import (
    Graph,
    Permutation,
    SymmetricIntMatrix,
    adjacency_matrix,
)

logger = logging.getLogger(__name__)

Subset = Tuple[int, ...]


class Flavor(str, Enum):
    """Which family of level matrices to build."""

    ADJACENCY = "adjacency"
    LAPLACIAN = "laplacian"


class SubsetIndexer:
    """
    Lexicographic ranking of the n-subsets of {1..N}, 1-based.

    At n = 2 the ranks are exactly the entries of the pair indexing tableau:
    rank({1,2}) = 1, rank({1,3}) = 2, ..., rank({N-1,N}) = C(N,2).

    Attributes:
        n_vertices (int): N
        level (int): Subset size n, 0 <= n <= N
        size (int): C(N, n)

    Example:
        >>> indexer = SubsetIndexer(6, 2)
        >>> indexer.rank((2, 6)), indexer.unrank(10)
        (9, (3, 4))
    """

    def __init__(self, n_vertices: int, level: int):
        if n_vertices < 1:
            raise ValueError(f"n_vertices must be positive, got {n_vertices}")
        if not 0 <= level <= n_vertices:
            raise ValueError(f"Level {level} is outside 0..{n_vertices}")
        self.n_vertices = n_vertices
        self.level = level
        self.size = math.comb(n_vertices, level)

    def rank(self, subset: Sequence[int]) -> int:
        """
        Lexicographic rank of a strictly increasing n-subset.

        Raises:
            ValueError: On wrong size, out-of-range elements or unsorted input
        """
        subset = tuple(subset)
        self._check_subset(subset)
        n, k = self.n_vertices, self.level
        rank = 0
        previous = 0
        for position, element in enumerate(subset, start=1):
            # subsets that agree so far but place a smaller element here
            for skipped in range(previous + 1, element):
                rank += math.comb(n - skipped, k - position)
            previous = element
        return rank + 1

    def unrank(self, r: int) -> Subset:
        """
        Inverse of rank.

        Raises:
            ValueError: If r is outside 1..C(N, n)
        """
        if not 1 <= r <= self.size:
            raise ValueError(f"Rank {r} is outside 1..{self.size}")
        n, k = self.n_vertices, self.level
        remaining = r - 1
        result: List[int] = []
        candidate = 1
        for position in range(1, k + 1):
            while True:
                block = math.comb(n - candidate, k - position)
                if remaining < block:
                    break
                remaining -= block
                candidate += 1
            result.append(candidate)
            candidate += 1
        return tuple(result)

    def subsets(self) -> Iterator[Subset]:
        """All n-subsets in rank order."""
        return itertools.combinations(range(1, self.n_vertices + 1), self.level)

    @cached_property
    def index_of(self) -> Dict[Subset, int]:
        """0-based row index of every subset, for bulk assembly."""
        return {subset: row for row, subset in enumerate(self.subsets())}

    def _check_subset(self, subset: Subset) -> None:
        if len(subset) != self.level:
            raise ValueError(f"Expected a {self.level}-subset, got {list(subset)}")
        for element in subset:
            if not 1 <= element <= self.n_vertices:
                raise ValueError(f"Element {element} is outside 1..{self.n_vertices}")
        if any(a >= b for a, b in zip(subset, subset[1:])):
            raise ValueError(f"Subset must be strictly increasing, got {list(subset)}")


@dataclass(frozen=True)
class LevelMatrix:
    """
    A level-n matrix together with how it was built.

    Attributes:
        base (SymmetricIntMatrix): C(N,n) x C(N,n) integer matrix
        n_vertices (int): N of the source graph
        level (int): n
        flavor (Flavor): adjacency or laplacian
    """

    base: SymmetricIntMatrix
    n_vertices: int
    level: int
    flavor: Flavor

    @property
    def dim(self) -> int:
        return int(self.base.shape[0])


def max_informative_level(n_vertices: int) -> int:
    """Highest level carrying new information; levels n and N - n are cospectral."""
    return n_vertices // 2


def check_level_guard(n_vertices: int, level: int, settings: Optional[Settings] = None) -> int:
    """
    Return C(N, n), refusing dimensions above the configured guard.

    Raises:
        GuardLimitError: If C(N, n) exceeds settings.max_level_dim
    """
    settings = resolve_settings(settings)
    dim = math.comb(n_vertices, level)
    if dim > settings.max_level_dim:
        # dense eigensolve is cubic in the dimension
        raise GuardLimitError(
            f"Level {level} on {n_vertices} vertices has dimension {dim}, above the "
            f"limit {settings.max_level_dim}; a dense matrix would need "
            f"{dim * dim * 8 / 2**30:.1f} GiB and roughly {dim**3:.2e} flops to diagonalize",
            limit=settings.max_level_dim,
            requested=dim,
        )
    return dim


def _assemble(g: Graph, n: int, laplacian: bool) -> SymmetricIntMatrix:
    """
    Edge-driven assembly: for each edge {a, b} and each (n-1)-subset T of the
    other vertices, S = T + {a} and S' = T + {b} are coupled.
    """
    indexer = SubsetIndexer(g.n_vertices, n)
    index_of = indexer.index_of
    matrix = np.zeros((indexer.size, indexer.size), dtype=np.int64)
    if n == 0 or n == g.n_vertices:
        return matrix

    started = time.perf_counter()
    off_diagonal = -1 if laplacian else 1
    for a, b in g.sorted_edges():
        others = [v for v in g.vertices() if v != a and v != b]
        for rest in itertools.combinations(others, n - 1):
            row = index_of[tuple(sorted(rest + (a,)))]
            col = index_of[tuple(sorted(rest + (b,)))]
            matrix[row, col] = off_diagonal
            matrix[col, row] = off_diagonal
            if laplacian:
                matrix[row, row] += 1
                matrix[col, col] += 1

    logger.debug(
        "Assembled level %d %s matrix of dimension %d in %.3fs",
        n,
        "laplacian" if laplacian else "adjacency",
        indexer.size,
        time.perf_counter() - started,
    )
    return matrix


def level_matrix(g: Graph, n: int, settings: Optional[Settings] = None) -> LevelMatrix:
    """
    Adjacency-flavour level-n matrix G^(n).

    Args:
        g: The graph
        n: Level, 0 <= n <= N; n = 0 gives the 1 x 1 zero vacuum block
        settings: Guard configuration

    Returns:
        LevelMatrix of dimension C(N, n)

    Raises:
        ValueError: If n is outside 0..N
        GuardLimitError: If C(N, n) exceeds the configured guard
    """
    if not 0 <= n <= g.n_vertices:
        raise ValueError(f"Level {n} is outside 0..{g.n_vertices}")
    check_level_guard(g.n_vertices, n, settings)
    return LevelMatrix(_assemble(g, n, laplacian=False), g.n_vertices, n, Flavor.ADJACENCY)


def level_laplacian(g: Graph, n: int, settings: Optional[Settings] = None) -> LevelMatrix:
    """
    Laplacian-flavour level-n matrix.

    Off-diagonal entries are -G[a, b] under the symmetric-difference rule; the
    diagonal entry of S is the number of edges with exactly one endpoint in S.

    Raises:
        ValueError: If n is outside 1..N
        GuardLimitError: If C(N, n) exceeds the configured guard
    """
    if not 1 <= n <= g.n_vertices:
        raise ValueError(f"Laplacian level {n} is outside 1..{g.n_vertices}")
    check_level_guard(g.n_vertices, n, settings)
    return LevelMatrix(_assemble(g, n, laplacian=True), g.n_vertices, n, Flavor.LAPLACIAN)


def build_level(
    g: Graph, n: int, flavor: Flavor = Flavor.ADJACENCY, settings: Optional[Settings] = None
) -> LevelMatrix:
    """Dispatch to level_matrix or level_laplacian."""
    if Flavor(flavor) is Flavor.LAPLACIAN:
        return level_laplacian(g, n, settings)
    return level_matrix(g, n, settings)


def pair_formula_matrix(g: Graph, n: int = 2) -> LevelMatrix:
    """
    Level-2 matrix from the four Kronecker-delta terms of the pair formula.

    With alpha(i), beta(i) the row and column of pair index i in the indexing
    tableau, entry (i, j) is

        d(a_i, a_j) G[b_i, b_j] + d(a_i, b_j) G[b_i, a_j]
        + d(b_i, a_j) G[a_i, b_j] + d(b_i, b_j) G[a_i, a_j]

    Kept as an independent construction to cross-check level_matrix(g, 2).

    Raises:
        ValueError: If n != 2 or g has fewer than 2 vertices
    """
    if n != 2:
        raise ValueError(f"The pair formula only defines level 2, got level {n}")
    if g.n_vertices < 2:
        raise ValueError("The pair formula needs at least 2 vertices")

    adjacency = adjacency_matrix(g)
    indexer = SubsetIndexer(g.n_vertices, 2)
    # 0-based (alpha, beta) for every pair index
    pairs = [(alpha - 1, beta - 1) for alpha, beta in indexer.subsets()]
    matrix = np.zeros((indexer.size, indexer.size), dtype=np.int64)
    for i, (alpha_i, beta_i) in enumerate(pairs):
        for j, (alpha_j, beta_j) in enumerate(pairs):
            matrix[i, j] = (
                (alpha_i == alpha_j) * adjacency[beta_i, beta_j]
                + (alpha_i == beta_j) * adjacency[beta_i, alpha_j]
                + (beta_i == alpha_j) * adjacency[alpha_i, beta_j]
                + (beta_i == beta_j) * adjacency[alpha_i, alpha_j]
            )
    return LevelMatrix(matrix, g.n_vertices, 2, Flavor.ADJACENCY)


def level_graph(g: Graph, n: int, settings: Optional[Settings] = None) -> Graph:
    """
    The level-n adjacency matrix read as a graph on C(N, n) vertices.

    Vertex k of the result is the k-th n-subset in rank order.
    """
    base = level_matrix(g, n, settings).base
    rows, cols = np.nonzero(np.triu(base, k=1))
    return Graph(base.shape[0], zip((rows + 1).tolist(), (cols + 1).tolist()))


def induced_subset_permutation(p: Permutation, n: int) -> Permutation:
    """
    The permutation q of level-n indices induced by relabelling vertices with p.

    q(rank(S)) = rank(p(S)), so level_matrix(apply_permutation(g, p), n) equals
    Q M Q^T with M = level_matrix(g, n) and Q = q.matrix().
    """
    indexer = SubsetIndexer(p.size, n)
    index_of = indexer.index_of
    return Permutation(
        [index_of[tuple(sorted(p(v) for v in subset))] + 1 for subset in indexer.subsets()]
    )


def complement_subset_permutation(n_vertices: int, n: int) -> List[int]:
    """
    Particle-hole map from level-n ranks to level-(N - n) ranks.

    Entry r - 1 is the rank of the complement of unrank(r). The complement
    conjugates G^(n) into G^(N - n), so the two levels are cospectral.
    """
    level = SubsetIndexer(n_vertices, n)
    hole = SubsetIndexer(n_vertices, n_vertices - n)
    everything = frozenset(range(1, n_vertices + 1))
    return [
        hole.index_of[tuple(sorted(everything.difference(subset)))] + 1
        for subset in level.subsets()
    ]
