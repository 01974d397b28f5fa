"""
Exciton Invariants Library.

Graph isomorphism invariants from the spectra of level-n exciton matrices,
with LangGraph pipelines that escalate through levels until a pair of graphs
is told apart.
"""

__version__ = "0.1.0"

from exciton_invariants.core import BasePipeline, Graph, Permutation, Settings
from exciton_invariants.pipelines import BatchPipeline, DistinguishPipeline

__all__ = [
    "BasePipeline",
    "BatchPipeline",
    "DistinguishPipeline",
    "Graph",
    "Permutation",
    "Settings",
    "__version__",
]
