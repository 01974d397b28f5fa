"""
Base pipeline class for invariant workflows.

This module provides the abstract base class that every comparison workflow
inherits from. It defines the core interface (a compiled LangGraph state graph
plus run/stream entry points) and the spectrum cache shared by all pipelines.
"""

import abc
import logging
from typing import Any, Dict, Hashable, Iterator, Optional, Tuple

from langgraph.graph.state import CompiledStateGraph

from exciton_invariants.core.config import Settings, resolve_settings
from exciton_invariants.core.exciton import Flavor, build_level
from exciton_invariants.core.graph import Graph
from exciton_invariants.core.spectral import Spectrum, default_tolerance, spectrum

logger = logging.getLogger(__name__)


class BasePipeline(abc.ABC):
    """
    Abstract base class for all invariant pipelines.

    A pipeline is a LangGraph state machine whose nodes compute invariants and
    whose conditional edges decide whether to escalate to the next level.
    Subclasses must implement build_graph() and run().

    The BasePipeline handles:
    - Settings resolution (explicit settings or the environment)
    - Graph compilation for state transitions
    - Caching of level spectra so no matrix is diagonalized twice
    - Optional lifecycle hooks for logging and monitoring

    Attributes:
        settings (Settings): Guards and numeric defaults
        graph (Optional[CompiledStateGraph]): Compiled LangGraph state graph
        _spectrum_cache (Dict[Tuple, Tuple[Spectrum, float]]): Spectrum and
            default tolerance keyed by (slot, level, flavor)
    """

    def __init__(self, settings: Optional[Settings] = None):
        """
        Initialize the base pipeline.

        Args:
            settings: Guards and numeric defaults. When omitted they are read
                      from EXCITON_* environment variables (and a .env file).
        """
        self.settings = resolve_settings(settings)
        self.graph: Optional[CompiledStateGraph] = None
        self._spectrum_cache: Dict[Tuple[Hashable, int, Flavor], Tuple[Spectrum, float]] = {}

        # Build the graph after initialization
        self.build_graph()

    @abc.abstractmethod
    def build_graph(self) -> None:
        """
        Construct and compile the LangGraph used by this pipeline.

        The compiled graph must be stored in self.graph.

        Example:
            def build_graph(self) -> None:
                workflow = StateGraph(dict)
                workflow.add_node("screen", self._screen)
                workflow.add_node("check_level", self._check_level)
                workflow.add_edge("screen", "check_level")
                self.graph = workflow.compile()
        """
        pass

    @abc.abstractmethod
    def run(self, input_data: Any) -> Any:
        """
        Run the pipeline to completion.

        Args:
            input_data: The graphs to compare and any per-run options

        Returns:
            The pipeline's report object
        """
        pass

    def stream(self, input_data: Any) -> Iterator[Any]:
        """
        Optional streaming interface for incremental results.

        Default implementation just yields the final report from run().
        Subclasses can override this to yield per-level updates.

        Args:
            input_data: Same as run()

        Yields:
            Incremental results or the final report
        """
        yield self.run(input_data)

    def _require_graph(self) -> CompiledStateGraph:
        if self.graph is None:
            raise ValueError("Graph has not been built. Call build_graph() first.")
        return self.graph

    def _level_spectrum(
        self, slot: Hashable, g: Graph, level: int, flavor: Flavor
    ) -> Tuple[Spectrum, float]:
        """
        Get or compute the level spectrum of a graph and its default tolerance.

        Args:
            slot: Cache key identifying the graph within this run
            g: The graph
            level: Level n
            flavor: Matrix flavour

        Returns:
            (spectrum, default tolerance of the level matrix)

        Raises:
            GuardLimitError: If the level matrix is above the size guard
        """
        key = (slot, level, Flavor(flavor))
        if key in self._spectrum_cache:
            return self._spectrum_cache[key]

        matrix = build_level(g, level, flavor, self.settings).base
        result = (spectrum(matrix), default_tolerance(matrix, self.settings))
        self._spectrum_cache[key] = result
        return result

    def clear_cache(self) -> None:
        """Forget cached spectra, e.g. before reusing the pipeline on new graphs."""
        self._spectrum_cache.clear()

    def on_start(self, input_data: Any) -> None:
        """
        Lifecycle hook called before pipeline execution starts.

        Args:
            input_data: The initial input to the pipeline
        """
        logger.debug("%s starting", type(self).__name__)

    def on_finish(self, result: Any) -> None:
        """
        Lifecycle hook called after pipeline execution completes.

        Args:
            result: The final report
        """
        logger.debug("%s finished", type(self).__name__)

    def on_error(self, error: Exception) -> None:
        """
        Lifecycle hook called when an error occurs during execution.

        Args:
            error: The exception that was raised
        """
        logger.error("%s failed: %s", type(self).__name__, error)
