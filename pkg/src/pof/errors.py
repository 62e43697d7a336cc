"""
Exceptions raised by the partitioned optimization library.
"""


class PartitionedOptimizationError(Exception):
    """Base class for every error raised by the library."""


class InfeasibleStartError(PartitionedOptimizationError):
    """The starting point of a run has an infinite objective value."""


class InfeasibleIndexError(PartitionedOptimizationError):
    """An operation needed gamma(x) for an index x outside X."""


class OracleError(PartitionedOptimizationError):
    """A numerical oracle could not compute gamma(x)."""


class BracketError(OracleError):
    """A dichotomic search could not find a bracketing interval."""


class NonFiniteValueError(PartitionedOptimizationError, ValueError):
    """A user function returned NaN."""
