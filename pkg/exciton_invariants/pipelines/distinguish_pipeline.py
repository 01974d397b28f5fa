"""
Distinguish Pipeline.

This module decides whether a pair of graphs can be proved non-isomorphic. It
runs the cheap screens first (vertex count, edge count, degree sequence) and
then compares level-n spectra for n = 1, 2, ... until one differs or the level
ceiling is reached.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any, Dict, Iterator, List, Optional, Tuple

from langgraph.graph import END, StateGraph

from exciton_invariants.core.base_pipeline import BasePipeline
from exciton_invariants.core.config import Settings
from exciton_invariants.core.errors import GuardLimitError
from exciton_invariants.core.exciton import Flavor, max_informative_level
from exciton_invariants.core.graph import Graph, degree_sequence
from exciton_invariants.core.spectral import Verdict, compare_spectra

logger = logging.getLogger(__name__)

GUARD_LIMIT = "GuardLimit"


class Conclusion(str, Enum):
    PROVED_NON_ISOMORPHIC = "ProvedNonIsomorphic"
    INDISTINGUISHABLE_UP_TO_LEVEL = "IndistinguishableUpToLevel"


@dataclass(frozen=True)
class ScreenCheck:
    """One cheap invariant compared across the pair."""

    name: str
    equal: bool
    left: Any
    right: Any


@dataclass(frozen=True)
class LevelCheck:
    """
    Spectral comparison at one level.

    Attributes:
        level (int): Level n
        flavor (str): adjacency or laplacian
        verdict (str): Equal, Different, or GuardLimit when the level was refused
        max_gap (Optional[float]): Largest eigenvalue gap, None when refused
        tolerance (Optional[float]): Tolerance used, None when refused
        dim (int): C(N, n)
        error (Optional[str]): Guard message when refused
    """

    level: int
    flavor: str
    verdict: str
    max_gap: Optional[float]
    tolerance: Optional[float]
    dim: int
    error: Optional[str] = None


@dataclass
class DistinguishReport:
    """
    Per-level verdicts for a graph pair.

    first_distinguishing_level is set iff the conclusion is
    ProvedNonIsomorphic. A proof found by the screens is reported as level 0.

    Attributes:
        n_vertices (Tuple[int, int]): Vertex counts of both graphs
        max_level (int): Highest level that was scheduled
        screens (List[ScreenCheck]): Screen results, in the order run
        levels_checked (List[LevelCheck]): Level results, increasing level
        first_distinguishing_level (Optional[int]): 0 for screens, n for level n
        conclusion (Conclusion): Outcome
        indistinguishable_up_to (Optional[int]): k for IndistinguishableUpToLevel(k)
        reason (str): Human-readable summary
    """

    n_vertices: Tuple[int, int]
    max_level: int
    screens: List[ScreenCheck] = field(default_factory=list)
    levels_checked: List[LevelCheck] = field(default_factory=list)
    first_distinguishing_level: Optional[int] = None
    conclusion: Conclusion = Conclusion.INDISTINGUISHABLE_UP_TO_LEVEL
    indistinguishable_up_to: Optional[int] = 0
    reason: str = ""

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["conclusion"] = self.conclusion.value
        data["n_vertices"] = list(self.n_vertices)
        return data


class DistinguishPipeline(BasePipeline):
    """
    Level-escalation pipeline for proving non-isomorphism.

    Graph structure:
        run_screens -> (done) finalize
        run_screens -> (levels) check_level
        check_level -> (continue) check_level
        check_level -> (finish) finalize

    State Keys:
        - graph1, graph2 (Graph): The pair
        - screens (List[ScreenCheck]): Screen results
        - levels_checked (List[LevelCheck]): Level results
        - level (int): Next level to check
        - max_level (int): Last level to check
        - first_distinguishing_level (Optional[int]): First level that differed
        - halted (bool): A guard refused a level; no higher level is attempted
        - reason (str): Summary of what decided the outcome
        - report (DistinguishReport): Filled by finalize

    Example:
        >>> pipeline = DistinguishPipeline(flavor="adjacency", skip_screens=True)
        >>> report = pipeline.run((star, four_cycle))
        >>> report.first_distinguishing_level
        2
    """

    def __init__(
        self,
        max_level: Optional[int] = None,
        flavor: Flavor = Flavor.ADJACENCY,
        tol: Optional[float] = None,
        skip_screens: bool = False,
        all_levels: bool = False,
        force: bool = False,
        settings: Optional[Settings] = None,
    ):
        """
        Initialize the distinguish pipeline.

        Args:
            max_level: Highest level to check; floor(N/2) when omitted
            flavor: adjacency or laplacian level matrices
            tol: Fixed comparison tolerance; by default the larger of the two
                 matrices' default tolerances
            skip_screens: Go straight to the spectra (vertex counts are still checked)
            all_levels: Keep checking levels after the first Different verdict
            force: Allow max_level above floor(N/2)
            settings: Guards and numeric defaults
        """
        self.max_level = max_level
        self.flavor = Flavor(flavor)
        self.tol = tol
        self.skip_screens = skip_screens
        self.all_levels = all_levels
        self.force = force
        super().__init__(settings=settings)

    def build_graph(self) -> None:
        """Build the screen-then-escalate state graph."""
        workflow = StateGraph(dict)

        workflow.add_node("run_screens", self._run_screens)
        workflow.add_node("check_level", self._check_level)
        workflow.add_node("finalize", self._finalize)

        workflow.set_entry_point("run_screens")

        workflow.add_conditional_edges(
            "run_screens",
            self._route_after_screens,
            {
                "levels": "check_level",
                "done": "finalize",
            },
        )
        workflow.add_conditional_edges(
            "check_level",
            self._should_continue,
            {
                "continue": "check_level",
                "finish": "finalize",
            },
        )
        workflow.add_edge("finalize", END)

        self.graph = workflow.compile()

    def run(self, input_data: Tuple[Graph, Graph]) -> DistinguishReport:
        """
        Compare a pair of graphs.

        Args:
            input_data: (graph1, graph2)

        Returns:
            The DistinguishReport

        Raises:
            GuardLimitError: If max_level exceeds floor(N/2) without force
            ValueError: If the graph hasn't been built or max_level is invalid
        """
        graph = self._require_graph()

        self.on_start(input_data)

        try:
            initial_state = self._initial_state(input_data)
            result_state = graph.invoke(initial_state, self._invoke_config(initial_state))
            report = result_state["report"]

            self.on_finish(report)

            return report

        except Exception as e:
            self.on_error(e)
            raise

    def stream(self, input_data: Tuple[Graph, Graph]) -> Iterator[Any]:
        """
        Yield each LevelCheck as it is computed, then the final report.

        Args:
            input_data: (graph1, graph2)

        Yields:
            LevelCheck per level, then the DistinguishReport
        """
        graph = self._require_graph()
        initial_state = self._initial_state(input_data)
        for chunk in graph.stream(
            initial_state, self._invoke_config(initial_state), stream_mode="updates"
        ):
            for node, update in chunk.items():
                if node == "check_level" and update["levels_checked"]:
                    yield update["levels_checked"][-1]
                elif node == "finalize":
                    yield update["report"]

    def _initial_state(self, input_data: Tuple[Graph, Graph]) -> Dict:
        # cache slots 1 and 2 are per pair
        self.clear_cache()
        graph1, graph2 = input_data
        n_vertices = min(graph1.n_vertices, graph2.n_vertices)
        ceiling = max_informative_level(n_vertices)
        max_level = ceiling if self.max_level is None else self.max_level

        if max_level < 0:
            raise ValueError(f"max_level must be non-negative, got {max_level}")
        if max_level > n_vertices:
            raise ValueError(f"max_level {max_level} exceeds the vertex count {n_vertices}")
        if max_level > ceiling and not self.force:
            raise GuardLimitError(
                f"Levels above floor(N/2) = {ceiling} repeat lower levels' spectra; "
                f"pass force to check up to level {max_level}",
                limit=ceiling,
                requested=max_level,
            )

        return {
            "graph1": graph1,
            "graph2": graph2,
            "screens": [],
            "levels_checked": [],
            "level": 1,
            "max_level": max_level,
            "first_distinguishing_level": None,
            "halted": False,
            "reason": "",
            "report": None,
        }

    @staticmethod
    def _invoke_config(state: Dict) -> Dict[str, Any]:
        # one super-step per level plus screens and finalize
        return {"recursion_limit": state["max_level"] + 10}

    def _run_screens(self, state: Dict) -> Dict:
        """
        Compare vertex count, edge count and degree sequence.

        Args:
            state: Current state dictionary

        Returns:
            Updated state with screens recorded
        """
        g1, g2 = state["graph1"], state["graph2"]
        screens: List[ScreenCheck] = [
            ScreenCheck("vertex count", g1.n_vertices == g2.n_vertices, g1.n_vertices, g2.n_vertices)
        ]
        if not self.skip_screens and screens[0].equal:
            screens.append(
                ScreenCheck("edge count", g1.edge_count == g2.edge_count, g1.edge_count, g2.edge_count)
            )
            left, right = degree_sequence(g1), degree_sequence(g2)
            screens.append(ScreenCheck("degree sequence", left == right, left, right))

        state["screens"] = screens
        failed = next((screen for screen in screens if not screen.equal), None)
        if failed is not None:
            state["first_distinguishing_level"] = 0
            state["reason"] = failed.name
            logger.info("Screen '%s' distinguishes the pair", failed.name)
        return state

    def _route_after_screens(self, state: Dict) -> str:
        """
        Decide whether spectra still need checking.

        Args:
            state: Current state dictionary

        Returns:
            "levels" to check spectra, "done" to stop
        """
        if state["max_level"] < 1:
            return "done"
        vertex_screen = state["screens"][0]
        if not vertex_screen.equal:
            return "done"
        if state["first_distinguishing_level"] is not None and not self.all_levels:
            return "done"
        return "levels"

    def _check_level(self, state: Dict) -> Dict:
        """
        Compare the level spectra of both graphs at state["level"].

        A guard refusal is recorded as a GuardLimit entry and halts escalation;
        levels already checked keep their verdicts.

        Args:
            state: Current state dictionary

        Returns:
            Updated state with the level result appended
        """
        level = state["level"]
        g1, g2 = state["graph1"], state["graph2"]
        dim = math.comb(g1.n_vertices, level)

        try:
            spectrum1, tol1 = self._level_spectrum(1, g1, level, self.flavor)
            spectrum2, tol2 = self._level_spectrum(2, g2, level, self.flavor)
        except GuardLimitError as e:
            logger.warning("Level %d skipped: %s", level, e)
            state["levels_checked"].append(
                LevelCheck(level, self.flavor.value, GUARD_LIMIT, None, None, dim, str(e))
            )
            state["halted"] = True
            return state

        tol = self.tol if self.tol is not None else max(tol1, tol2)
        verdict = compare_spectra(spectrum1, spectrum2, tol)
        state["levels_checked"].append(
            LevelCheck(level, self.flavor.value, verdict.outcome.value, verdict.max_gap, tol, dim)
        )
        logger.info(
            "Level %d (%s, dim %d): %s, max gap %.3g",
            level,
            self.flavor.value,
            dim,
            verdict.outcome.value,
            verdict.max_gap,
        )

        if not verdict.is_equal and state["first_distinguishing_level"] is None:
            state["first_distinguishing_level"] = level
            state["reason"] = f"level {level} {self.flavor.value} spectra differ"

        state["level"] = level + 1
        return state

    def _should_continue(self, state: Dict) -> str:
        """
        Decide whether to escalate to the next level.

        Args:
            state: Current state dictionary

        Returns:
            "continue" to check the next level, "finish" to stop
        """
        if state["halted"]:
            return "finish"
        if state["first_distinguishing_level"] is not None and not self.all_levels:
            return "finish"
        if state["level"] > state["max_level"]:
            return "finish"
        return "continue"

    def _finalize(self, state: Dict) -> Dict:
        """
        Assemble the DistinguishReport.

        Args:
            state: Current state dictionary

        Returns:
            Updated state with the report
        """
        g1, g2 = state["graph1"], state["graph2"]
        report = DistinguishReport(
            n_vertices=(g1.n_vertices, g2.n_vertices),
            max_level=state["max_level"],
            screens=list(state["screens"]),
            levels_checked=list(state["levels_checked"]),
        )

        if state["first_distinguishing_level"] is not None:
            report.first_distinguishing_level = state["first_distinguishing_level"]
            report.conclusion = Conclusion.PROVED_NON_ISOMORPHIC
            report.indistinguishable_up_to = None
            report.reason = state["reason"]
        else:
            equal_through = 0
            for check in report.levels_checked:
                if check.verdict != Verdict.EQUAL.value:
                    break
                equal_through = check.level
            report.indistinguishable_up_to = equal_through
            report.reason = f"all invariants agree through level {equal_through}"
            if state["halted"]:
                report.reason += "; higher levels refused by the size guard"

        state["report"] = report
        return state
