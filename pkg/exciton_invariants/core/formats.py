"""
Graph text formats: edge list, hex upper triangle and graph6.

Edge list
    First non-comment line is N, every further line is "i j" with
    1 <= i < j <= N. ``#`` starts a comment anywhere on a line.

Hex upper triangle
    Each hex digit expands to four bits, most significant first. The rightmost
    C(N, 2) bits fill the strict upper triangle row by row: (1,2), (1,3), ...,
    (1,N), (2,3), ... Any leading bits beyond that must be zero.

graph6
    The standard catalog format, read and written through networkx.
"""

import itertools
import logging
import math
import re
import string
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

import networkx as nx
from networkx.readwrite.graph6 import data_to_n

from exciton_invariants.core.errors import CatalogError, GraphFormatError, InputError
from exciton_invariants.core.graph import MAX_VERTICES, Graph

logger = logging.getLogger(__name__)

EDGELIST = "edgelist"
HEX = "hex"
GRAPH6 = "graph6"
FORMATS = (EDGELIST, HEX, GRAPH6)

_EXTENSIONS: Dict[str, str] = {
    ".g6": GRAPH6,
    ".graph6": GRAPH6,
    ".hex": HEX,
}

_GRAPH6_HEADER = ">>graph6<<"
_HEX_DIGITS = frozenset(string.hexdigits)
_DECIMAL = re.compile(r"[0-9]+")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    """Yield (line_number, content) for lines that are not blank after comment removal."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = _strip_comment(raw)
        if content:
            yield number, content


def _check_vertex_count(n_vertices: int, line_number: Optional[int] = None) -> None:
    if n_vertices < 1:
        raise GraphFormatError(f"Vertex count must be positive, got {n_vertices}", line_number)
    if n_vertices > MAX_VERTICES:
        raise GraphFormatError(
            f"Vertex count {n_vertices} is above the supported maximum {MAX_VERTICES}", line_number
        )


def parse_edge_list(text: str) -> Graph:
    """
    Parse edge-list text.

    Args:
        text: Header line N followed by "i j" lines

    Returns:
        The graph with exactly the listed edges

    Raises:
        GraphFormatError: On a missing or bad header, a malformed line, a vertex
                          out of range, a self-loop, i > j, or a duplicate edge
    """
    lines = _content_lines(text)
    try:
        header_number, header = next(lines)
    except StopIteration:
        raise GraphFormatError("Edge list is empty; expected the vertex count N") from None

    if not _DECIMAL.fullmatch(header):
        raise GraphFormatError(f"Expected vertex count, got {header!r}", header_number)
    n_vertices = int(header)
    _check_vertex_count(n_vertices, header_number)

    edges = set()
    for number, content in lines:
        tokens = content.split()
        if len(tokens) != 2:
            raise GraphFormatError(f"Expected 'i j', got {content!r}", number)
        if not all(_DECIMAL.fullmatch(token) for token in tokens):
            raise GraphFormatError(f"Non-integer vertex in {content!r}", number)
        i, j = int(tokens[0]), int(tokens[1])
        if not (1 <= i <= n_vertices and 1 <= j <= n_vertices):
            raise GraphFormatError(f"Vertex out of range 1..{n_vertices} in {content!r}", number)
        if i == j:
            raise GraphFormatError(f"Self-loop at vertex {i}", number)
        if i > j:
            raise GraphFormatError(f"Edge must be written with i < j, got {content!r}", number)
        if (i, j) in edges:
            raise GraphFormatError(f"Duplicate edge {{{i},{j}}}", number)
        edges.add((i, j))

    return Graph(n_vertices, edges)


def serialize_edge_list(g: Graph) -> str:
    """Write g in edge-list form; parse_edge_list inverts it."""
    lines = [str(g.n_vertices)]
    lines.extend(f"{i} {j}" for i, j in g.sorted_edges())
    return "\n".join(lines) + "\n"


def parse_hex_upper_triangle(hex_string: str, n_vertices: int) -> Graph:
    """
    Decode a hex upper-triangle string.

    Args:
        hex_string: Hex digits, case-insensitive; whitespace and a leading 0x
                    are ignored
        n_vertices: N, which the format cannot encode itself

    Returns:
        The decoded graph

    Raises:
        GraphFormatError: On a non-hex character, too few bits, or nonzero
                          leading bits beyond C(N, 2)
    """
    _check_vertex_count(n_vertices)

    digits = "".join(hex_string.split())
    if digits[:2].lower() == "0x":
        digits = digits[2:]
    bad = next((c for c in digits if c not in _HEX_DIGITS), None)
    if bad is not None:
        raise GraphFormatError(f"Non-hex character {bad!r} in hex graph")
    bits = "".join(f"{int(digit, 16):04b}" for digit in digits)

    needed = math.comb(n_vertices, 2)
    if len(bits) < needed:
        raise GraphFormatError(
            f"Hex string has {len(bits)} bits but N={n_vertices} needs {needed}"
        )
    excess, payload = bits[: len(bits) - needed], bits[len(bits) - needed :]
    if "1" in excess:
        raise GraphFormatError(
            f"Hex string has nonzero bits beyond the {needed} required for N={n_vertices}"
        )

    pairs = itertools.combinations(range(1, n_vertices + 1), 2)
    return Graph(n_vertices, (pair for pair, bit in zip(pairs, payload) if bit == "1"))


def to_hex_upper_triangle(g: Graph) -> str:
    """
    Encode g as upper-case hex, left-padding the bit string to a multiple of 4.

    A graph with fewer than two vertices encodes as "0".
    """
    bits = "".join(
        "1" if g.has_edge(i, j) else "0"
        for i, j in itertools.combinations(range(1, g.n_vertices + 1), 2)
    )
    if not bits:
        return "0"
    bits = bits.zfill(-(-len(bits) // 4) * 4)
    return "".join(f"{int(bits[k : k + 4], 2):X}" for k in range(0, len(bits), 4))


def parse_graph6(text: str) -> Graph:
    """
    Decode one graph6 record.

    Raises:
        GraphFormatError: If networkx rejects the record
    """
    record = text.strip()
    if record.startswith(_GRAPH6_HEADER):
        record = record[len(_GRAPH6_HEADER) :]
    if not record:
        raise GraphFormatError("Empty graph6 record")
    try:
        data = record.encode("ascii")
        n_vertices, _ = data_to_n([byte - 63 for byte in data])
    except (nx.NetworkXError, ValueError, IndexError, UnicodeEncodeError) as e:
        raise GraphFormatError(f"Invalid graph6 record {record!r}: {e}") from e
    if n_vertices > MAX_VERTICES:
        raise GraphFormatError(
            f"graph6 record has {n_vertices} vertices, above the supported maximum {MAX_VERTICES}"
        )
    try:
        nx_graph = nx.from_graph6_bytes(data)
    except (nx.NetworkXError, ValueError) as e:
        raise GraphFormatError(f"Invalid graph6 record {record!r}: {e}") from e
    if nx_graph.number_of_nodes() == 0:
        raise GraphFormatError("graph6 record describes a graph with no vertices")
    return Graph.from_networkx(nx_graph)


def to_graph6(g: Graph) -> str:
    """Encode g as a graph6 record without header or newline."""
    nx_graph = nx.convert_node_labels_to_integers(g.to_networkx(), ordering="sorted")
    return nx.to_graph6_bytes(nx_graph, header=False).decode("ascii").strip()


def detect_format(path: Path) -> str:
    """Guess a format from the file extension; unknown extensions mean edge list."""
    return _EXTENSIONS.get(Path(path).suffix.lower(), EDGELIST)


def parse_graph(text: str, fmt: str, n_vertices: Optional[int] = None) -> Graph:
    """
    Parse graph text in any supported format.

    Comment lines are dropped for hex and graph6 too, so fixture files can
    carry provenance notes.

    Raises:
        GraphFormatError: If the text is malformed
        InputError: If fmt is unknown or hex is requested without n_vertices
    """
    if fmt == EDGELIST:
        return parse_edge_list(text)

    payload = " ".join(content for _, content in _content_lines(text))
    if fmt == HEX:
        if n_vertices is None:
            raise InputError("The hex format needs the vertex count (--vertices N)")
        return parse_hex_upper_triangle(payload, n_vertices)
    if fmt == GRAPH6:
        return parse_graph6(payload)
    raise InputError(f"Unknown graph format '{fmt}'. Supported formats: {', '.join(FORMATS)}")


def format_graph(g: Graph, fmt: str) -> str:
    """Render g in the given format, newline-terminated."""
    if fmt == EDGELIST:
        return serialize_edge_list(g)
    if fmt == HEX:
        return to_hex_upper_triangle(g) + "\n"
    if fmt == GRAPH6:
        return to_graph6(g) + "\n"
    raise InputError(f"Unknown graph format '{fmt}'. Supported formats: {', '.join(FORMATS)}")


def read_graph(path: Path, fmt: Optional[str] = None, n_vertices: Optional[int] = None) -> Graph:
    """
    Read one graph from a file.

    Args:
        path: File to read
        fmt: Format name; detected from the extension when None
        n_vertices: Required for hex

    Raises:
        InputError: If the file cannot be read or parsed
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e
    return parse_graph(text, fmt or detect_format(path), n_vertices)


def read_catalog(
    path: Path,
    fmt: Optional[str] = None,
    n_vertices: Optional[int] = None,
) -> Tuple[List[Tuple[str, Graph]], List[Tuple[str, str]]]:
    """
    Read a catalog of graphs.

    A directory holds one graph per file, read in sorted file-name order. A
    single hex or graph6 file holds one graph per non-comment line, named
    "<file>:<line>".

    Returns:
        (named graphs, skipped entries as (name, reason))

    Raises:
        InputError: If the path cannot be read, or a single edge-list file is given
    """
    path = Path(path)
    graphs: List[Tuple[str, Graph]] = []
    skipped: List[Tuple[str, str]] = []

    if path.is_dir():
        for entry in sorted(p for p in path.iterdir() if p.is_file()):
            try:
                graphs.append((entry.name, read_graph(entry, fmt, n_vertices)))
            except InputError as e:
                logger.warning("Skipping catalog entry %s: %s", entry.name, e)
                skipped.append((entry.name, str(e)))
        return graphs, skipped

    fmt = fmt or detect_format(path)
    if fmt == EDGELIST:
        raise CatalogError(
            "An edge-list catalog must be a directory with one graph per file"
        )
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e}") from e

    for number, content in _content_lines(text):
        name = f"{path.name}:{number}"
        try:
            graphs.append((name, parse_graph(content, fmt, n_vertices)))
        except InputError as e:
            logger.warning("Skipping catalog entry %s: %s", name, e)
            skipped.append((name, str(e)))
    return graphs, skipped
