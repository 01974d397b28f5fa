"""
Unit tests for the edge-list, hex and graph6 codecs and file reading.
"""

import pytest

from exciton_invariants.core.errors import CatalogError, GraphFormatError, InputError
from exciton_invariants.core.formats import (
    EDGELIST,
    GRAPH6,
    HEX,
    detect_format,
    format_graph,
    parse_edge_list,
    parse_graph,
    parse_graph6,
    parse_hex_upper_triangle,
    read_catalog,
    read_graph,
    serialize_edge_list,
    to_graph6,
    to_hex_upper_triangle,
)
from exciton_invariants.core.graph import Graph, degree_sequence
from exciton_invariants.fixtures import COSPECTRAL24_FILES, fixture_path

STAR_TEXT = """# star with centre 5
5
1 5
2 5   # spoke
3 5
4 5
"""


class TestParseEdgeList:
    """Tests for parse_edge_list."""

    def test_parses_with_comments(self, star):
        """Test that comments and blank lines are ignored."""
        assert parse_edge_list(STAR_TEXT) == star

    def test_header_only(self):
        """Test a graph with no edges."""
        assert parse_edge_list("4\n") == Graph.empty(4)

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("", None, "empty"),
            ("x\n", 1, "Expected vertex count"),
            ("0\n", 1, "must be positive"),
            ("3\n1 2 3\n", 2, "Expected 'i j'"),
            ("3\n1 a\n", 2, "Non-integer"),
            ("12\n1_0 11\n", 2, "Non-integer"),
            ("3\n١ 2\n", 2, "Non-integer"),
            ("1_0\n", 1, "Expected vertex count"),
            ("３\n", 1, "Expected vertex count"),
            ("1000000000\n", 1, "supported maximum"),
            ("3\n1 4\n", 2, "out of range"),
            ("3\n2 2\n", 2, "Self-loop"),
            ("3\n2 1\n", 2, "i < j"),
            ("3\n1 2\n\n1 2\n", 4, "Duplicate edge"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line, message):
        """Test each malformed input raises GraphFormatError at the right line."""
        with pytest.raises(GraphFormatError, match=message) as excinfo:
            parse_edge_list(text)

        assert excinfo.value.line_number == line
        if line is not None:
            assert str(excinfo.value).startswith(f"line {line}: ")

    def test_serialize_round_trip(self, four_cycle):
        """Test that serialize_edge_list is inverted by parse_edge_list."""
        text = serialize_edge_list(four_cycle)

        assert text == "5\n1 2\n1 4\n2 3\n3 4\n"
        assert parse_edge_list(text) == four_cycle


class TestHexUpperTriangle:
    """Tests for the hex upper-triangle codec."""

    def test_star_encoding(self, star):
        """Test the bit layout on the 5-vertex star."""
        # pairs (1,5) (2,5) (3,5) (4,5) are bits 4, 7, 9, 10 of 10, padded to 12
        assert to_hex_upper_triangle(star) == "04B"
        assert parse_hex_upper_triangle("04b", 5) == star

    def test_empty_graph_is_all_zero(self):
        """Test that an edgeless graph renders as zero digits."""
        assert to_hex_upper_triangle(Graph.empty(5)) == "000"
        assert to_hex_upper_triangle(Graph.empty(1)) == "0"

    def test_prefix_and_whitespace_ignored(self):
        """Test that 0x and embedded whitespace are accepted."""
        assert parse_hex_upper_triangle("0x 7", 3) == Graph.complete(3)

    def test_nonzero_excess_bits(self):
        """Test that leading bits beyond C(N,2) must be zero."""
        with pytest.raises(GraphFormatError, match="nonzero bits"):
            parse_hex_upper_triangle("F", 3)

    def test_too_short(self):
        """Test that too few digits are rejected."""
        with pytest.raises(GraphFormatError, match="needs 10"):
            parse_hex_upper_triangle("FF", 5)

    def test_non_hex_character(self):
        """Test that a stray character is named."""
        with pytest.raises(GraphFormatError, match="'G'"):
            parse_hex_upper_triangle("0G", 3)

    @pytest.mark.parametrize("digit", ["٦", "６", "²"])
    def test_non_ascii_digits_rejected(self, digit):
        """Test that Unicode digits outside 0-9 and a-f are not read as hex."""
        with pytest.raises(GraphFormatError, match="Non-hex character"):
            parse_hex_upper_triangle(digit, 3)

    def test_vertex_count_above_maximum(self):
        """Test that N beyond the supported maximum is refused before decoding."""
        with pytest.raises(GraphFormatError, match="supported maximum"):
            parse_hex_upper_triangle("0", 10_001)

    def test_bundled_fixtures_are_eight_regular(self):
        """Test the 69-digit 24-vertex strings decode to 8-regular graphs."""
        for name in COSPECTRAL24_FILES:
            g = read_graph(fixture_path(name), HEX, 24)

            assert degree_sequence(g) == [8] * 24
            assert g.edge_count == 96

    def test_round_trip_at_several_sizes(self, rng, random_graph):
        """Test encoder and decoder agree for N not divisible into whole digits."""
        for n_vertices in (2, 3, 4, 6, 9):
            g = random_graph(rng, n_vertices)
            assert parse_hex_upper_triangle(to_hex_upper_triangle(g), n_vertices) == g


class TestGraph6:
    """Tests for the graph6 codec."""

    def test_round_trip(self, four_cycle):
        """Test encode then decode returns the same graph."""
        assert parse_graph6(to_graph6(four_cycle)) == four_cycle

    def test_header_accepted(self, star):
        """Test that the >>graph6<< header is stripped."""
        assert parse_graph6(">>graph6<<" + to_graph6(star)) == star

    def test_known_record(self):
        """Test a standard record: 'Bw' is the triangle."""
        assert parse_graph6("Bw") == Graph.complete(3)

    def test_huge_order_refused(self):
        """Test a record declaring 2^36 - 1 vertices is refused without decoding it."""
        with pytest.raises(GraphFormatError, match="supported maximum"):
            parse_graph6("~~~~~~~~")

    def test_invalid_record(self):
        """Test that garbage raises GraphFormatError."""
        with pytest.raises(GraphFormatError):
            parse_graph6("")


def test_detect_format(tmp_path):
    """Test format detection by extension."""
    assert detect_format(tmp_path / "a.g6") == GRAPH6
    assert detect_format(tmp_path / "a.GRAPH6") == GRAPH6
    assert detect_format(tmp_path / "a.hex") == HEX
    assert detect_format(tmp_path / "a.txt") == EDGELIST


class TestParseGraph:
    """Tests for the format dispatcher."""

    def test_hex_needs_vertex_count(self):
        """Test hex without N raises InputError."""
        with pytest.raises(InputError, match="--vertices"):
            parse_graph("04B", HEX)

    def test_unknown_format(self):
        """Test an unknown format name."""
        with pytest.raises(InputError, match="Unknown graph format"):
            parse_graph("x", "dot")

    def test_comment_lines_dropped_for_hex(self, star):
        """Test provenance comments in hex files."""
        assert parse_graph("# provenance\n04B\n", HEX, 5) == star

    @pytest.mark.parametrize("fmt", [EDGELIST, HEX, GRAPH6])
    def test_format_graph_parses_back(self, star, fmt):
        """Test format_graph output is accepted by parse_graph."""
        assert parse_graph(format_graph(star, fmt), fmt, 5) == star


class TestReadGraph:
    """Tests for file reading."""

    def test_reads_by_extension(self, tmp_path, star):
        """Test the format is detected from the file name."""
        path = tmp_path / "star.g6"
        path.write_text(to_graph6(star) + "\n")

        assert read_graph(path) == star

    def test_missing_file(self, tmp_path):
        """Test an unreadable path raises InputError."""
        with pytest.raises(InputError, match="Cannot read"):
            read_graph(tmp_path / "missing.txt")


class TestReadCatalog:
    """Tests for catalog reading."""

    def test_directory_sorted_and_skips_bad_entries(self, tmp_path, star, four_cycle):
        """Test a directory catalog is read in name order with bad files skipped."""
        (tmp_path / "b.txt").write_text(serialize_edge_list(four_cycle))
        (tmp_path / "a.txt").write_text(serialize_edge_list(star))
        (tmp_path / "c.txt").write_text("5\n1 1\n")

        graphs, skipped = read_catalog(tmp_path)

        assert graphs == [("a.txt", star), ("b.txt", four_cycle)]
        assert [name for name, _ in skipped] == ["c.txt"]
        assert "Self-loop" in skipped[0][1]

    def test_graph6_lines(self, tmp_path, star, four_cycle):
        """Test a single graph6 file with one graph per line."""
        path = tmp_path / "catalog.g6"
        path.write_text(f"# two graphs\n{to_graph6(star)}\n{to_graph6(four_cycle)}\n")

        graphs, skipped = read_catalog(path)

        assert graphs == [("catalog.g6:2", star), ("catalog.g6:3", four_cycle)]
        assert skipped == []

    def test_single_edge_list_file_rejected(self, tmp_path, star):
        """Test that an edge-list catalog must be a directory."""
        path = tmp_path / "one.txt"
        path.write_text(serialize_edge_list(star))

        with pytest.raises(CatalogError, match="directory"):
            read_catalog(path)
