"""Bundled example graphs."""

from importlib import resources
from pathlib import Path
from typing import Tuple

from exciton_invariants.core.formats import HEX, parse_graph
from exciton_invariants.core.graph import Graph

COSPECTRAL24_VERTICES = 24
COSPECTRAL24_FILES = ("cospectral24_a.hex", "cospectral24_b.hex")


def fixture_path(name: str) -> Path:
    """Filesystem path of a bundled fixture file."""
    return Path(str(resources.files(__package__).joinpath(name)))


def load_cospectral24_pair() -> Tuple[Graph, Graph]:
    """The two 24-vertex graphs that first differ at level 3."""
    first, second = (
        parse_graph(
            resources.files(__package__).joinpath(name).read_text(encoding="utf-8"),
            HEX,
            COSPECTRAL24_VERTICES,
        )
        for name in COSPECTRAL24_FILES
    )
    return first, second
