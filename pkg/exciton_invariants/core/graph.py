"""
Simple undirected graphs and their level-one matrices.

Vertices are labelled 1..N everywhere in the public API. Matrices are dense
numpy integer arrays indexed from 0, so vertex v lives at row/column v - 1.
"""

from typing import FrozenSet, Iterable, Iterator, List, Sequence, Tuple

import networkx as nx
import numpy as np
import numpy.typing as npt

from exciton_invariants.core.errors import InputError

Edge = Tuple[int, int]

# Dense symmetric integer matrix: adjacency, Laplacian and level-n matrices.
SymmetricIntMatrix = npt.NDArray[np.int64]

# Largest vertex count accepted by any constructor or parser.
MAX_VERTICES = 10_000


class Graph:
    """
    Immutable simple undirected graph on vertices 1..n_vertices.

    Edges are stored as ordered pairs (i, j) with i < j. Two graphs compare
    equal when they have the same vertex count and the same edge set.

    Attributes:
        n_vertices (int): Number of vertices N
        edges (FrozenSet[Tuple[int, int]]): Edge set, each pair with i < j

    Example:
        >>> star = Graph.from_edges(5, [(1, 5), (2, 5), (3, 5), (4, 5)])
        >>> star.degree(5)
        4
    """

    __slots__ = ("_n_vertices", "_edges", "_neighbors")

    def __init__(self, n_vertices: int, edges: Iterable[Edge] = ()):
        """
        Initialize the graph.

        Args:
            n_vertices: Number of vertices, at least 1
            edges: Vertex pairs; each is normalised to (min, max)

        Raises:
            ValueError: On a self-loop, an endpoint outside 1..n_vertices,
                        or a non-positive vertex count
            InputError: If n_vertices is above MAX_VERTICES
        """
        if n_vertices < 1:
            raise ValueError(f"A graph needs at least one vertex, got {n_vertices}")
        if n_vertices > MAX_VERTICES:
            raise InputError(
                f"Graphs are limited to {MAX_VERTICES} vertices, got {n_vertices}"
            )

        normalised = set()
        for edge in edges:
            i, j = (int(edge[0]), int(edge[1]))
            if i == j:
                raise ValueError(f"Self-loop at vertex {i} is not allowed")
            if not (1 <= i <= n_vertices and 1 <= j <= n_vertices):
                raise ValueError(
                    f"Edge {{{i},{j}}} has an endpoint outside 1..{n_vertices}"
                )
            normalised.add((min(i, j), max(i, j)))

        neighbors: List[List[int]] = [[] for _ in range(n_vertices + 1)]
        for i, j in normalised:
            neighbors[i].append(j)
            neighbors[j].append(i)

        self._n_vertices = n_vertices
        self._edges: FrozenSet[Edge] = frozenset(normalised)
        self._neighbors = tuple(tuple(sorted(ns)) for ns in neighbors)

    @classmethod
    def from_edges(cls, n_vertices: int, edges: Iterable[Edge]) -> "Graph":
        """
        Build a graph, rejecting duplicate edges instead of merging them.

        Raises:
            ValueError: If the same unordered pair is listed twice
        """
        edge_list = [(min(a, b), max(a, b)) for a, b in edges]
        if len(set(edge_list)) != len(edge_list):
            seen = set()
            for edge in edge_list:
                if edge in seen:
                    raise ValueError(f"Duplicate edge {{{edge[0]},{edge[1]}}}")
                seen.add(edge)
        return cls(n_vertices, edge_list)

    @classmethod
    def empty(cls, n_vertices: int) -> "Graph":
        """Graph with no edges."""
        return cls(n_vertices)

    @classmethod
    def complete(cls, n_vertices: int) -> "Graph":
        """Complete graph K_N."""
        return cls(
            n_vertices,
            ((i, j) for i in range(1, n_vertices + 1) for j in range(i + 1, n_vertices + 1)),
        )

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph) -> "Graph":
        """
        Convert a networkx graph, relabelling its nodes 1..N in sorted order.

        Raises:
            ValueError: If the graph is directed, has self-loops or no nodes
        """
        if nx_graph.is_directed():
            raise ValueError("Directed graphs are not supported")
        nodes = sorted(nx_graph.nodes())
        label = {node: k for k, node in enumerate(nodes, start=1)}
        return cls(len(nodes), ((label[u], label[v]) for u, v in nx_graph.edges()))

    @property
    def n_vertices(self) -> int:
        return self._n_vertices

    @property
    def edges(self) -> FrozenSet[Edge]:
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def vertices(self) -> range:
        return range(1, self._n_vertices + 1)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        """Sorted neighbours of vertex v."""
        return self._neighbors[v]

    def degree(self, v: int) -> int:
        return len(self._neighbors[v])

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self._edges

    def sorted_edges(self) -> List[Edge]:
        return sorted(self._edges)

    def to_networkx(self) -> nx.Graph:
        """Equivalent networkx graph with nodes 1..N."""
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(self.vertices())
        nx_graph.add_edges_from(self._edges)
        return nx_graph

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n_vertices == other._n_vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n_vertices, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n_vertices={self._n_vertices}, edges={self.sorted_edges()})"


class Permutation:
    """
    Bijection on {1..size}, stored as the image sequence (p(1), ..., p(size)).

    Example:
        >>> p = Permutation([5, 2, 3, 4, 1])
        >>> p(1), p.inverse()(5)
        (5, 1)
    """

    __slots__ = ("_images",)

    def __init__(self, images: Sequence[int]):
        """
        Args:
            images: p(1), p(2), ..., p(size)

        Raises:
            ValueError: If images is not a bijection onto 1..len(images)
        """
        images = tuple(int(x) for x in images)
        if not images:
            raise ValueError("A permutation needs at least one element")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"Not a bijection on 1..{len(images)}: {list(images)}")
        self._images = images

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(range(1, size + 1))

    @property
    def size(self) -> int:
        return len(self._images)

    @property
    def images(self) -> Tuple[int, ...]:
        return self._images

    def __call__(self, i: int) -> int:
        return self._images[i - 1]

    def inverse(self) -> "Permutation":
        inverse = [0] * self.size
        for i, image in enumerate(self._images, start=1):
            inverse[image - 1] = i
        return Permutation(inverse)

    def compose(self, other: "Permutation") -> "Permutation":
        """Return self after other, i.e. i -> self(other(i))."""
        if other.size != self.size:
            raise ValueError(f"Cannot compose permutations of size {self.size} and {other.size}")
        return Permutation([self(other(i)) for i in range(1, self.size + 1)])

    def matrix(self) -> SymmetricIntMatrix:
        """Permutation matrix P with P[p(a), a] = 1, so P @ e_a = e_{p(a)}."""
        p_matrix = np.zeros((self.size, self.size), dtype=np.int64)
        for a, image in enumerate(self._images):
            p_matrix[image - 1, a] = 1
        return p_matrix

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._images == other._images

    def __hash__(self) -> int:
        return hash(self._images)

    def __repr__(self) -> str:
        return f"Permutation({list(self._images)})"


def adjacency_matrix(g: Graph) -> SymmetricIntMatrix:
    """
    Adjacency matrix: entry (i, j) is 1 iff {i, j} is an edge.

    Args:
        g: The graph

    Returns:
        N x N symmetric {0,1} matrix with zero diagonal
    """
    matrix = np.zeros((g.n_vertices, g.n_vertices), dtype=np.int64)
    for i, j in g.edges:
        matrix[i - 1, j - 1] = 1
        matrix[j - 1, i - 1] = 1
    return matrix


def laplacian_matrix(g: Graph) -> SymmetricIntMatrix:
    """Laplacian L = D - A, positive semidefinite with zero row sums."""
    adjacency = adjacency_matrix(g)
    return np.diag(adjacency.sum(axis=1)) - adjacency


def degree_sequence(g: Graph) -> List[int]:
    """Vertex degrees sorted in descending order."""
    return sorted((g.degree(v) for v in g.vertices()), reverse=True)


def apply_permutation(g: Graph, p: Permutation) -> Graph:
    """
    Relabel vertex a of g as p(a).

    The result has edge {i, j} iff {p^-1(i), p^-1(j)} is an edge of g, and its
    adjacency matrix is P A P^T with P = p.matrix().

    Raises:
        ValueError: If p.size differs from g.n_vertices
    """
    if p.size != g.n_vertices:
        raise ValueError(
            f"Permutation of size {p.size} cannot relabel a graph on {g.n_vertices} vertices"
        )
    return Graph(g.n_vertices, ((p(a), p(b)) for a, b in g.edges))


def connected_component_count(g: Graph) -> int:
    """Number of connected components, isolated vertices included."""
    return nx.number_connected_components(g.to_networkx())
