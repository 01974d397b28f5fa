"""
Batch Pipeline.

Partitions a catalog of graphs on the same vertex count into buckets that
successive invariants cannot tell apart: first the degree sequence, then the
level-1, level-2, ... spectra. Graphs left sharing a bucket after the last
level are reported as unresolved pairs.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from langgraph.graph import END, StateGraph

from exciton_invariants.core.base_pipeline import BasePipeline
from exciton_invariants.core.config import Settings
from exciton_invariants.core.errors import CatalogError, GuardLimitError
from exciton_invariants.core.exciton import Flavor, max_informative_level
from exciton_invariants.core.graph import Graph, degree_sequence
from exciton_invariants.core.spectral import Spectrum, compare_spectra

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StageSummary:
    """Bucket sizes after one refinement stage."""

    invariant: str
    bucket_sizes: List[int]
    error: Optional[str] = None


@dataclass
class BatchReport:
    """
    Outcome of refining a catalog.

    Attributes:
        n_graphs (int): Catalog size
        n_vertices (int): Shared vertex count
        flavor (str): Level-matrix flavour used
        max_level (int): Last level scheduled
        stages (List[StageSummary]): One entry per invariant applied
        buckets (List[List[str]]): Final buckets, by graph name
        unresolved_pairs (List[Tuple[str, str]]): Pairs sharing a final bucket
    """

    n_graphs: int
    n_vertices: int
    flavor: str
    max_level: int
    stages: List[StageSummary] = field(default_factory=list)
    buckets: List[List[str]] = field(default_factory=list)
    unresolved_pairs: List[Tuple[str, str]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["unresolved_pairs"] = [list(pair) for pair in self.unresolved_pairs]
        return data


class BatchPipeline(BasePipeline):
    """
    Catalog refinement by escalating invariants.

    Graph structure:
        validate -> screen -> refine_level -> (continue) refine_level
                                           -> (finish) finalize

    State Keys:
        - names (List[str]): Graph names, catalog order
        - graphs (List[Graph]): The graphs
        - buckets (List[List[int]]): Current partition as catalog indices
        - stages (List[StageSummary]): Applied invariants
        - level (int): Next level to refine by
        - max_level (int): Last level
        - halted (bool): A guard refused a level
        - report (BatchReport): Filled by finalize
    """

    def __init__(
        self,
        max_level: Optional[int] = None,
        flavor: Flavor = Flavor.ADJACENCY,
        tol: Optional[float] = None,
        settings: Optional[Settings] = None,
    ):
        """
        Initialize the batch pipeline.

        Args:
            max_level: Highest level to refine by; floor(N/2) when omitted
            flavor: adjacency or laplacian level matrices
            tol: Fixed comparison tolerance; defaults per matrix pair
            settings: Guards, numeric defaults and the worker count
        """
        self.max_level = max_level
        self.flavor = Flavor(flavor)
        self.tol = tol
        super().__init__(settings=settings)

    def build_graph(self) -> None:
        """Build the refinement state graph."""
        workflow = StateGraph(dict)

        workflow.add_node("validate", self._validate)
        workflow.add_node("screen", self._screen)
        workflow.add_node("refine_level", self._refine_level)
        workflow.add_node("finalize", self._finalize)

        workflow.set_entry_point("validate")

        workflow.add_edge("validate", "screen")
        workflow.add_conditional_edges(
            "screen",
            self._should_continue,
            {
                "continue": "refine_level",
                "finish": "finalize",
            },
        )
        workflow.add_conditional_edges(
            "refine_level",
            self._should_continue,
            {
                "continue": "refine_level",
                "finish": "finalize",
            },
        )
        workflow.add_edge("finalize", END)

        self.graph = workflow.compile()

    def run(self, input_data: Sequence[Tuple[str, Graph]]) -> BatchReport:
        """
        Refine a catalog.

        Args:
            input_data: (name, graph) pairs

        Returns:
            The BatchReport

        Raises:
            CatalogError: If there are fewer than two graphs or vertex counts differ
        """
        graph = self._require_graph()

        self.on_start(input_data)

        try:
            self.clear_cache()
            entries = list(input_data)
            initial_state = {
                "names": [name for name, _ in entries],
                "graphs": [g for _, g in entries],
                "buckets": [],
                "stages": [],
                "level": 1,
                "max_level": 0,
                "halted": False,
                "report": None,
            }
            # validate, screen, finalize plus one step per level
            top = max((g.n_vertices for _, g in entries), default=0)
            result_state = graph.invoke(initial_state, {"recursion_limit": top + 10})
            report = result_state["report"]

            self.on_finish(report)

            return report

        except Exception as e:
            self.on_error(e)
            raise

    def _validate(self, state: Dict) -> Dict:
        """
        Check the catalog is comparable and fix the level range.

        Args:
            state: Current state dictionary

        Returns:
            Updated state with max_level set
        """
        graphs = state["graphs"]
        if len(graphs) < 2:
            raise CatalogError(f"A catalog needs at least 2 graphs to compare, got {len(graphs)}")
        counts = sorted({g.n_vertices for g in graphs})
        if len(counts) > 1:
            raise CatalogError(f"Catalog mixes vertex counts {counts}")

        n_vertices = counts[0]
        ceiling = max_informative_level(n_vertices)
        max_level = ceiling if self.max_level is None else self.max_level
        if not 0 <= max_level <= ceiling:
            raise GuardLimitError(
                f"Batch levels must lie in 0..floor(N/2) = {ceiling}, got {max_level}",
                limit=ceiling,
                requested=max_level,
            )
        state["max_level"] = max_level
        return state

    def _screen(self, state: Dict) -> Dict:
        """
        Bucket by edge count and degree sequence.

        Args:
            state: Current state dictionary

        Returns:
            Updated state with the initial partition
        """
        keyed: Dict[Tuple, List[int]] = {}
        for index, g in enumerate(state["graphs"]):
            keyed.setdefault((g.edge_count, tuple(degree_sequence(g))), []).append(index)

        state["buckets"] = list(keyed.values())
        state["stages"].append(
            StageSummary("degree_sequence", [len(bucket) for bucket in state["buckets"]])
        )
        return state

    def _refine_level(self, state: Dict) -> Dict:
        """
        Split every multi-graph bucket by the spectrum at state["level"].

        Eigensolves for all graphs needing one run on a thread pool; results are
        consumed in catalog order so the partition is deterministic.

        Args:
            state: Current state dictionary

        Returns:
            Updated state with the refined partition
        """
        level = state["level"]
        graphs = state["graphs"]
        pending = [index for bucket in state["buckets"] if len(bucket) > 1 for index in bucket]
        invariant = f"level_{level}_{self.flavor.value}"

        try:
            with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
                solved = list(
                    pool.map(
                        lambda index: self._level_spectrum(index, graphs[index], level, self.flavor),
                        pending,
                    )
                )
        except GuardLimitError as e:
            logger.warning("Refinement stopped at level %d: %s", level, e)
            state["stages"].append(
                StageSummary(invariant, [len(b) for b in state["buckets"]], str(e))
            )
            state["halted"] = True
            return state

        spectra: Dict[int, Tuple[Spectrum, float]] = dict(zip(pending, solved))
        refined: List[List[int]] = []
        for bucket in state["buckets"]:
            if len(bucket) == 1:
                refined.append(bucket)
                continue
            refined.extend(self._split(bucket, spectra))

        state["buckets"] = refined
        state["stages"].append(StageSummary(invariant, [len(bucket) for bucket in refined]))
        logger.info("Level %d leaves %d buckets", level, len(refined))
        state["level"] = level + 1
        return state

    def _split(
        self, bucket: List[int], spectra: Dict[int, Tuple[Spectrum, float]]
    ) -> List[List[int]]:
        """Group a bucket by spectrum, each sub-bucket led by its first member."""
        groups: List[List[int]] = []
        for index in bucket:
            spectrum_here, tol_here = spectra[index]
            for group in groups:
                spectrum_lead, tol_lead = spectra[group[0]]
                tol = self.tol if self.tol is not None else max(tol_here, tol_lead)
                if compare_spectra(spectrum_here, spectrum_lead, tol).is_equal:
                    group.append(index)
                    break
            else:
                groups.append([index])
        return groups

    def _should_continue(self, state: Dict) -> str:
        """
        Decide whether another level is needed.

        Args:
            state: Current state dictionary

        Returns:
            "continue" while some bucket holds two graphs and levels remain
        """
        if state["halted"] or state["level"] > state["max_level"]:
            return "finish"
        if all(len(bucket) == 1 for bucket in state["buckets"]):
            return "finish"
        return "continue"

    def _finalize(self, state: Dict) -> Dict:
        """
        Assemble the BatchReport.

        Args:
            state: Current state dictionary

        Returns:
            Updated state with the report
        """
        names = state["names"]
        buckets = [[names[index] for index in bucket] for bucket in state["buckets"]]
        unresolved = [
            pair for bucket in buckets if len(bucket) > 1 for pair in itertools.combinations(bucket, 2)
        ]
        state["report"] = BatchReport(
            n_graphs=len(names),
            n_vertices=state["graphs"][0].n_vertices,
            flavor=self.flavor.value,
            max_level=state["max_level"],
            stages=list(state["stages"]),
            buckets=buckets,
            unresolved_pairs=unresolved,
        )
        return state
