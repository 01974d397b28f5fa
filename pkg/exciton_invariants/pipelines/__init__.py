"""Invariant pipeline implementations."""

from exciton_invariants.pipelines.batch_pipeline import BatchPipeline, BatchReport
from exciton_invariants.pipelines.distinguish_pipeline import (
    Conclusion,
    DistinguishPipeline,
    DistinguishReport,
)

__all__ = [
    "BatchPipeline",
    "BatchReport",
    "Conclusion",
    "DistinguishPipeline",
    "DistinguishReport",
]
