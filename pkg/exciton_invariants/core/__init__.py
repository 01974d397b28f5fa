"""Core building blocks: graphs, level matrices, spectra and the base pipeline."""

from exciton_invariants.core.base_pipeline import BasePipeline
from exciton_invariants.core.config import Settings, get_settings
from exciton_invariants.core.graph import Graph, Permutation

__all__ = ["BasePipeline", "Graph", "Permutation", "Settings", "get_settings"]
