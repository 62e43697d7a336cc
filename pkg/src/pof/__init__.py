"""Partitioned optimization framework: problems, barrier and reformulation."""

from .core import (
    KnownOptimum,
    OracleResult,
    PartitionedProblem,
    BarrierObjective,
    ReformulatedObjective,
    check_extended_real,
    extreme_barrier,
    index_roundtrip,
    reformulated_objective,
)
from .errors import (
    PartitionedOptimizationError,
    InfeasibleStartError,
    InfeasibleIndexError,
    OracleError,
    BracketError,
    NonFiniteValueError,
)

__all__ = [
    "KnownOptimum",
    "OracleResult",
    "PartitionedProblem",
    "BarrierObjective",
    "ReformulatedObjective",
    "check_extended_real",
    "extreme_barrier",
    "index_roundtrip",
    "reformulated_objective",
    "PartitionedOptimizationError",
    "InfeasibleStartError",
    "InfeasibleIndexError",
    "OracleError",
    "BracketError",
    "NonFiniteValueError",
]
