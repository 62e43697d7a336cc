"""
Core objects of the partitioned optimization framework.

A partitioned problem splits the variable space Y into fibers Y(x) indexed by
x in X. The oracle gamma returns a global minimizer of phi on Y(x) intersected
with Omega, and the index function chi maps any y back to its fiber. The
reformulated objective Phi(x) = phi(gamma(x)) is then minimized over X, with
+inf (extreme barrier) for indices whose subproblem is infeasible.

Extended reals are plain Python floats: math.inf and -math.inf are the two
infinite values, NaN is never a valid value.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import InfeasibleIndexError, NonFiniteValueError

logger = logging.getLogger(__name__)

Vector = np.ndarray


def check_extended_real(value: float, source: str = "objective") -> float:
    """
    Validate a value of R U {-inf, +inf}.

    Args:
        value: Value returned by a user function
        source: Name used in the error message

    Returns:
        The value as a float

    Raises:
        NonFiniteValueError: if the value is NaN
    """
    value = float(value)
    if math.isnan(value):
        raise NonFiniteValueError(f"{source} returned NaN")
    return value


def _frozen_vector(values) -> Vector:
    array = np.array(values, dtype=float).reshape(-1)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class OracleResult:
    """
    Output of the oracle gamma at some index x.

    Feasible results carry the fiber minimizer y and its value phi(y);
    infeasible results carry neither and stand for x outside X.
    """

    y: Optional[Vector] = None
    value: float = math.inf

    def __post_init__(self):
        if self.y is not None:
            object.__setattr__(self, "y", _frozen_vector(self.y))
            object.__setattr__(self, "value", check_extended_real(self.value, "oracle"))

    @property
    def is_feasible(self) -> bool:
        return self.y is not None

    @classmethod
    def feasible(cls, y, value: float) -> "OracleResult":
        return cls(y=y, value=value)

    @classmethod
    def infeasible(cls) -> "OracleResult":
        return cls()


@dataclass(frozen=True)
class KnownOptimum:
    """Documented optimum of a problem: index x*, point y* and phi value."""

    x: Vector
    y: Vector
    value: float
    attained: bool = True

    def __post_init__(self):
        object.__setattr__(self, "x", _frozen_vector(self.x))
        object.__setattr__(self, "y", _frozen_vector(self.y))


@dataclass(frozen=True)
class PartitionedProblem:
    """
    A problem instance of the partitioned optimization framework.

    Attributes:
        id: Problem identifier
        dim_y: Dimension of the full variable space Y
        dim_x: Dimension of the index space X
        phi: Objective on Y, returns an extended real
        in_omega: Membership test for the feasible set Omega
        chi: Index function, maps y to the index of its fiber
        oracle: Oracle function gamma, maps x to an OracleResult
        box_y: (lower, upper) bounds used by the full-space baseline
        box_x: (lower, upper) bounds for starting indices
        known_optimum: Documented optimum, if any
        description: One-line human description
    """

    id: str
    dim_y: int
    dim_x: int
    phi: Callable[[Vector], float]
    in_omega: Callable[[Vector], bool]
    chi: Callable[[Vector], Vector]
    oracle: Callable[[Vector], OracleResult]
    box_y: Tuple[Vector, Vector]
    box_x: Tuple[Vector, Vector]
    known_optimum: Optional[KnownOptimum] = None
    description: str = ""

    def __post_init__(self):
        if self.dim_x < 1 or self.dim_y < 1:
            raise ValueError("dimensions must be positive")
        if self.dim_x > self.dim_y:
            raise ValueError(f"dim_x={self.dim_x} exceeds dim_y={self.dim_y}")
        for name, dim in (("box_y", self.dim_y), ("box_x", self.dim_x)):
            lower, upper = getattr(self, name)
            lower, upper = _frozen_vector(lower), _frozen_vector(upper)
            if lower.size != dim or upper.size != dim:
                raise ValueError(f"{name} must have {dim} components")
            if np.any(lower > upper):
                raise ValueError(f"{name} has lower > upper")
            object.__setattr__(self, name, (lower, upper))

    def in_box_y(self, y: Vector) -> bool:
        lower, upper = self.box_y
        return bool(np.all(y >= lower) and np.all(y <= upper))

    def in_box_x(self, x: Vector) -> bool:
        lower, upper = self.box_x
        return bool(np.all(x >= lower) and np.all(x <= upper))


def extreme_barrier(value: float, feasible: bool) -> float:
    """
    Extreme barrier: keep the value on feasible points, +inf elsewhere.

    Args:
        value: Objective value (extended real)
        feasible: Whether the point belongs to the feasible set

    Returns:
        value if feasible, +inf otherwise
    """
    if not feasible:
        return math.inf
    return check_extended_real(value)


def _as_index(problem: PartitionedProblem, x) -> Vector:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != problem.dim_x:
        raise ValueError(f"index has {x.size} components, problem {problem.id} expects {problem.dim_x}")
    return x


def reformulated_objective(problem: PartitionedProblem, x) -> Tuple[float, Optional[Vector]]:
    """
    Evaluate Phi(x) = phi(gamma(x)), or +inf when x is outside X.

    Oracle failures (OracleError) are propagated, never turned into +inf.

    Returns:
        (Phi(x), gamma(x)) or (+inf, None)
    """
    x = _as_index(problem, x)
    result = problem.oracle(x)
    if not result.is_feasible:
        return math.inf, None
    return check_extended_real(result.value, f"{problem.id} oracle"), result.y


def index_roundtrip(problem: PartitionedProblem, x) -> float:
    """
    Max-norm of chi(gamma(x)) - x.

    Raises:
        InfeasibleIndexError: if gamma(x) does not exist
    """
    x = _as_index(problem, x)
    result = problem.oracle(x)
    if not result.is_feasible:
        raise InfeasibleIndexError(f"{problem.id}: no fiber minimizer at x={x.tolist()}")
    return float(np.max(np.abs(np.asarray(problem.chi(result.y), dtype=float) - x)))


@dataclass
class ReformulatedObjective:
    """
    Callable Phi over the index space, as seen by the solver.

    Keeps the last feasible fiber minimizer so callers can recover gamma(x)
    without a second oracle call.
    """

    problem: PartitionedProblem
    last_point: Optional[Vector] = field(default=None, init=False)

    def __call__(self, x: Vector) -> float:
        value, y = reformulated_objective(self.problem, x)
        self.last_point = y
        return value

    def recover(self, x: Vector) -> Optional[Vector]:
        """Full-space solution gamma(x), or None when x is outside X."""
        return reformulated_objective(self.problem, x)[1]


@dataclass
class BarrierObjective:
    """
    phi with the extreme barrier of Omega intersected with box_y.

    phi is only evaluated on points of that set.
    """

    problem: PartitionedProblem
    use_box: bool = True

    def __call__(self, y: Vector) -> float:
        y = np.asarray(y, dtype=float)
        feasible = bool(self.problem.in_omega(y))
        if feasible and self.use_box:
            feasible = self.problem.in_box_y(y)
        if not feasible:
            return math.inf
        return extreme_barrier(self.problem.phi(y), True)
