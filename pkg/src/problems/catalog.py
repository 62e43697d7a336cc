"""
Catalog of the eight benchmark problems.

Four desk-scale problems (mono, radial, nonlinear, dim2) and their
large-dimensional alterations (heavy_*). Every problem is a composite
phi(y) = smooth part + epsilon(f(y)) with fibers {y : f(y) = x}, so chi = f.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..pof.core import KnownOptimum, OracleResult, PartitionedProblem
from . import components as c
from .oracles import HEAVY_DIM2_BISECTION, BisectionSpec, dim2_oracle, heavy_dim2_g_inverse_all

logger = logging.getLogger(__name__)


class ProblemId(str, Enum):
    MONO = "mono"
    RADIAL = "radial"
    NONLINEAR = "nonlinear"
    DIM2 = "dim2"
    HEAVY_MONO = "heavy_mono"
    HEAVY_RADIAL = "heavy_radial"
    HEAVY_NONLINEAR = "heavy_nonlinear"
    HEAVY_DIM2 = "heavy_dim2"

    @property
    def is_heavy(self) -> bool:
        return self.value.startswith("heavy_")


PROBLEM_IDS = [p.value for p in ProblemId]

# (shrink, expand) of the poll radius for each problem
POLL_RADIUS: Dict[ProblemId, Tuple[float, float]] = {
    ProblemId.MONO: (0.5, 1.0),
    ProblemId.RADIAL: (0.5, 1.0),
    ProblemId.NONLINEAR: (0.5, 1.0),
    ProblemId.DIM2: (0.75, 2.0),
    ProblemId.HEAVY_MONO: (0.5, 1.0),
    ProblemId.HEAVY_RADIAL: (0.5, 1.0),
    ProblemId.HEAVY_NONLINEAR: (0.5, 2.0),
    ProblemId.HEAVY_DIM2: (0.75, 2.0),
}

# Index-space boxes; they gate starting points only
INDEX_BOXES: Dict[ProblemId, Tuple[float, float]] = {
    ProblemId.MONO: (-30.0, 30.0),
    ProblemId.RADIAL: (0.0, 30.0),
    ProblemId.NONLINEAR: (-20.0, 20.0),
    ProblemId.DIM2: (-10.0, 10.0),
    ProblemId.HEAVY_MONO: (-30.0, 30.0),
    ProblemId.HEAVY_RADIAL: (0.0, 30.0),
    ProblemId.HEAVY_NONLINEAR: (0.0, 130.0),
    ProblemId.HEAVY_DIM2: (-90.0, 90.0),
}

# Local minimizer of the nonlinear reformulation, reached from the large starts
NONLINEAR_LOCAL_MINIMUM = 9.26779505


def parse_problem_id(value) -> ProblemId:
    """
    Raises:
        ValueError: listing the catalog when value is not a problem id
    """
    try:
        return ProblemId(value)
    except ValueError:
        raise ValueError(f"unknown problem '{value}', expected one of: {', '.join(PROBLEM_IDS)}")


def _box(lower, upper, dim: int):
    return np.full(dim, lower, dtype=float), np.full(dim, upper, dtype=float)


def _vector(y, dim: int) -> np.ndarray:
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size != dim:
        raise ValueError(f"expected {dim} components, got {y.size}")
    return y


def _always(y) -> bool:
    return True


def _feasible(phi: Callable, y) -> OracleResult:
    return OracleResult.feasible(y, phi(y))


# -- desk-scale problems ------------------------------------------------------------


def _mono() -> PartitionedProblem:
    def phi(y):
        y1, y2 = _vector(y, 2)
        return (y2 - c.mono_sigma(y1)) ** 2 + c.mono_epsilon(y1)

    def oracle(x):
        x = float(x[0])
        return _feasible(phi, np.array([x, c.mono_sigma(x)]))

    return PartitionedProblem(
        id=ProblemId.MONO.value,
        dim_y=2,
        dim_x=1,
        phi=phi,
        in_omega=_always,
        chi=lambda y: np.array([float(y[0])]),
        oracle=oracle,
        box_y=(np.array([-30.0, -70.0]), np.array([30.0, 70.0])),
        box_x=_box(*INDEX_BOXES[ProblemId.MONO], 1),
        known_optimum=KnownOptimum(x=[0.0], y=[0.0, 0.0], value=0.0),
        description="discontinuous monovariable noise, fibers {x} x R",
    )


def _radial_in_omega(y) -> bool:
    y = np.asarray(y, dtype=float)
    return bool(y[0] >= 0 and np.all(y[1:] >= 0) and np.all(y[1:] < c.TWO_PI))


def _radial() -> PartitionedProblem:
    def phi(y):
        r, theta = _vector(y, 2)
        if r < 0:
            return math.inf
        return math.sqrt(r) * math.sin((theta - c.radial_sigma(r)) / 2.0) ** 2 + c.radial_epsilon(r)

    def oracle(x):
        x = float(x[0])
        if x < 0:
            return OracleResult.infeasible()
        return _feasible(phi, np.array([x, c.mod_2pi(c.radial_sigma(x))]))

    return PartitionedProblem(
        id=ProblemId.RADIAL.value,
        dim_y=2,
        dim_x=1,
        phi=phi,
        in_omega=_radial_in_omega,
        chi=lambda y: np.array([float(y[0])]),
        oracle=oracle,
        box_y=(np.array([0.0, 0.0]), np.array([30.0, c.TWO_PI])),
        box_x=_box(*INDEX_BOXES[ProblemId.RADIAL], 1),
        known_optimum=KnownOptimum(x=[c.SQRT2], y=[c.SQRT2, 0.0], value=0.0),
        description="radial noise in polar coordinates, fibers {r} x [0, 2pi)",
    )


def _nonlinear_smooth(y1: float, y2: float) -> float:
    ratio = y1 * y1 / (y2 * y2 + 1.0) - 1.0
    return math.log1p(ratio * ratio)


def _nonlinear() -> PartitionedProblem:
    def phi(y):
        y1, y2 = _vector(y, 2)
        return _nonlinear_smooth(y1, y2) + c.nonlinear_epsilon(y1 * y2)

    def oracle(x):
        return _feasible(phi, c.nonlinear_fiber_point(x[0]))

    return PartitionedProblem(
        id=ProblemId.NONLINEAR.value,
        dim_y=2,
        dim_x=1,
        phi=phi,
        in_omega=lambda y: bool(y[0] >= 0),
        chi=lambda y: np.array([float(y[0]) * float(y[1])]),
        oracle=oracle,
        box_y=(np.array([0.0, -20.0]), np.array([20.0, 20.0])),
        box_x=_box(*INDEX_BOXES[ProblemId.NONLINEAR], 1),
        known_optimum=KnownOptimum(x=[4.0], y=c.nonlinear_gamma(4.0), value=0.0, attained=False),
        description="noise on the product y1*y2, generalized optimum at x = 4",
    )


def _dim2(spec: BisectionSpec) -> PartitionedProblem:
    def phi(y):
        y = _vector(y, 3)
        return float(np.max(np.abs(y))) + c.dim2_epsilon(c.dim2_f(y))

    def oracle(x):
        return _feasible(phi, dim2_oracle(x, spec).y_hat)

    return PartitionedProblem(
        id=ProblemId.DIM2.value,
        dim_y=3,
        dim_x=2,
        phi=phi,
        in_omega=_always,
        chi=c.dim2_f,
        oracle=oracle,
        box_y=_box(-10.0, 10.0, 3),
        box_x=_box(*INDEX_BOXES[ProblemId.DIM2], 2),
        known_optimum=KnownOptimum(x=[0.0, 0.0], y=[0.0, 0.0, 0.0], value=0.0),
        description="two-dimensional noise, oracle by bisection on M(x)",
    )


# -- large-dimensional problems ------------------------------------------------------


def _heavy_mono() -> PartitionedProblem:
    dim = c.HEAVY_DIM + 1

    def phi(y):
        y = _vector(y, dim)
        residual = y - c.heavy_mono_sigma(y[0])
        return float(residual @ residual) + c.mono_epsilon(y[0])

    def oracle(x):
        return _feasible(phi, c.heavy_mono_sigma(x[0]))

    return PartitionedProblem(
        id=ProblemId.HEAVY_MONO.value,
        dim_y=dim,
        dim_x=1,
        phi=phi,
        in_omega=_always,
        chi=lambda y: np.array([float(y[0])]),
        oracle=oracle,
        box_y=_box(-30.0, 30.0, dim),
        box_x=_box(*INDEX_BOXES[ProblemId.HEAVY_MONO], 1),
        known_optimum=KnownOptimum(x=[0.0], y=c.heavy_mono_sigma(0.0), value=0.0),
        description="101 variables, monovariable noise on y0",
    )


def _heavy_radial() -> PartitionedProblem:
    dim = c.HEAVY_DIM + 1

    def phi(y):
        y = _vector(y, dim)
        r = y[0]
        if r < 0:
            return math.inf
        angles = np.sin((y[1:] - c.heavy_radial_sigma(r)) / 2.0) ** 2
        return math.sqrt(r) / 100.0 * float(angles.sum()) + c.radial_epsilon(r)

    def gamma(x: float) -> np.ndarray:
        return np.concatenate([[x], c.mod_2pi(c.heavy_radial_sigma(x))])

    def oracle(x):
        x = float(x[0])
        if x < 0:
            return OracleResult.infeasible()
        return _feasible(phi, gamma(x))

    return PartitionedProblem(
        id=ProblemId.HEAVY_RADIAL.value,
        dim_y=dim,
        dim_x=1,
        phi=phi,
        in_omega=_radial_in_omega,
        chi=lambda y: np.array([float(y[0])]),
        oracle=oracle,
        box_y=_box(0.0, c.TWO_PI, dim),
        box_x=_box(*INDEX_BOXES[ProblemId.HEAVY_RADIAL], 1),
        known_optimum=KnownOptimum(x=[c.SQRT2], y=gamma(c.SQRT2), value=0.0),
        description="101 variables, radial noise with 100 angles",
    )


def _heavy_nonlinear_in_omega(y) -> bool:
    y = np.asarray(y, dtype=float)
    return bool(np.all(y > 0) and np.all(np.diff(y) >= 0))


def _heavy_nonlinear_spread(products: np.ndarray) -> float:
    with np.errstate(over="ignore"):
        ratios = products[:, None] / products[None, :] - 1.0
        return float(np.log1p(ratios * ratios).sum())


def _heavy_nonlinear() -> PartitionedProblem:
    def phi(y):
        y = _vector(y, c.HEAVY_DIM)
        products = c.heavy_nonlinear_products(y)
        if np.any(products == 0):
            return math.inf
        return _heavy_nonlinear_spread(products) + c.nonlinear_epsilon(c.heavy_nonlinear_combine(products))

    def oracle(x):
        x = float(x[0])
        if x <= 0:
            return OracleResult.infeasible()
        return _feasible(phi, c.heavy_nonlinear_fiber_point(x))

    return PartitionedProblem(
        id=ProblemId.HEAVY_NONLINEAR.value,
        dim_y=c.HEAVY_DIM,
        dim_x=1,
        phi=phi,
        in_omega=_heavy_nonlinear_in_omega,
        chi=lambda y: np.array([c.heavy_nonlinear_f(y)]),
        oracle=oracle,
        box_y=_box(1e-6, 3.0, c.HEAVY_DIM),
        box_x=_box(*INDEX_BOXES[ProblemId.HEAVY_NONLINEAR], 1),
        known_optimum=KnownOptimum(x=[4.0], y=np.ones(c.HEAVY_DIM), value=0.0, attained=False),
        description="100 variables, noise on the mean of twenty block products",
    )


def _heavy_dim2(spec: BisectionSpec) -> PartitionedProblem:
    def phi(y):
        y = _vector(y, c.HEAVY_DIM)
        return float(np.abs(y).sum()) + c.heavy_dim2_epsilon(c.heavy_dim2_f(y))

    def oracle(x):
        y = np.zeros(c.HEAVY_DIM)
        y[9::10] = heavy_dim2_g_inverse_all(x, spec)
        return _feasible(phi, y)

    return PartitionedProblem(
        id=ProblemId.HEAVY_DIM2.value,
        dim_y=c.HEAVY_DIM,
        dim_x=c.DIM2_BLOCKS,
        phi=phi,
        in_omega=_always,
        chi=c.heavy_dim2_f,
        oracle=oracle,
        box_y=_box(-5.0, 5.0, c.HEAVY_DIM),
        box_x=_box(*INDEX_BOXES[ProblemId.HEAVY_DIM2], c.DIM2_BLOCKS),
        known_optimum=KnownOptimum(x=np.zeros(c.DIM2_BLOCKS), y=np.zeros(c.HEAVY_DIM), value=0.0),
        description="100 variables, ten-dimensional noise, oracle by bisection on g_j",
    )


@lru_cache(maxsize=None)
def make_problem(problem_id, bisection: Optional[BisectionSpec] = None) -> PartitionedProblem:
    """
    Build a fully wired problem of the catalog.

    Args:
        problem_id: ProblemId or its string value
        bisection: Dichotomic search settings of the dim2 / heavy_dim2 oracles

    Returns:
        The PartitionedProblem
    """
    pid = parse_problem_id(problem_id)
    if pid is ProblemId.DIM2:
        return _dim2(bisection or BisectionSpec())
    if pid is ProblemId.HEAVY_DIM2:
        return _heavy_dim2(bisection or HEAVY_DIM2_BISECTION)
    builders = {
        ProblemId.MONO: _mono,
        ProblemId.RADIAL: _radial,
        ProblemId.NONLINEAR: _nonlinear,
        ProblemId.HEAVY_MONO: _heavy_mono,
        ProblemId.HEAVY_RADIAL: _heavy_radial,
        ProblemId.HEAVY_NONLINEAR: _heavy_nonlinear,
    }
    return builders[pid]()


def fiber_point(problem_id, x, t: float, block: int = 1) -> np.ndarray:
    """
    Point of the fiber {y : chi(y) = x} for the one-parameter fibers.

    mono: (x, t); radial: (x, t mod 2pi); dim2: s_x(t); heavy_dim2: gamma(x)
    with the first free variable of `block` set to t and y_{10 block}
    adjusted so that f(y) = x.
    """
    pid = parse_problem_id(problem_id)
    x = np.asarray(x, dtype=float).reshape(-1)
    if pid is ProblemId.MONO:
        return np.array([x[0], t])
    if pid is ProblemId.RADIAL:
        return np.array([x[0], c.mod_2pi(t)])
    if pid is ProblemId.DIM2:
        return c.dim2_fiber_point(x, t)
    if pid is ProblemId.HEAVY_DIM2:
        shifted = x.copy()
        shifted[block - 1] += t
        y = np.zeros(c.HEAVY_DIM)
        y[9::10] = heavy_dim2_g_inverse_all(shifted)
        y[10 * (block - 1)] = t
        return y
    raise ValueError(f"{pid.value} has no one-parameter fiber parametrization")


# -- desk tables --------------------------------------------------------------------

E = math.e


@dataclass(frozen=True)
class TableSpec:
    """
    One reproduction table: the problem, its eight starts and the measure x_hat.

    thresholds are the three levels whose first crossing is reported.
    """

    table: int
    problem: ProblemId
    labels: Tuple[str, ...]
    starts: Tuple[Tuple[float, ...], ...]
    measure: Callable[[np.ndarray], float]
    thresholds: Tuple[float, float, float]
    max_iterations: Optional[int] = None


DESK_TABLES: Dict[int, TableSpec] = {
    1: TableSpec(
        table=1,
        problem=ProblemId.MONO,
        labels=("+9.753", "+pi", "+sqrt2", "+e+1", "-9.753", "-pi", "-sqrt2", "-e-1"),
        starts=tuple(
            (v,) for v in (9.753, math.pi, c.SQRT2, E + 1.0, -9.753, -math.pi, -c.SQRT2, -E - 1.0)
        ),
        measure=lambda x: float(x[0]),
        thresholds=(5e-3, 5e-6, 5e-9),
    ),
    2: TableSpec(
        table=2,
        problem=ProblemId.RADIAL,
        labels=("0", "2^-5", "3sqrt2", "4pi", "5", "e", "e^2", "e^3"),
        starts=tuple(
            (v,) for v in (0.0, 2.0**-5, 3.0 * c.SQRT2, 4.0 * math.pi, 5.0, E, E**2, E**3)
        ),
        measure=lambda x: float(x[0]) - c.SQRT2,
        thresholds=(5e-3, 5e-6, 5e-9),
    ),
    3: TableSpec(
        table=3,
        problem=ProblemId.NONLINEAR,
        labels=("-e^2", "-pi", "-sqrt2", "+e", "+3sqrt2", "+2e^2", "+4pi", "+e^3"),
        starts=tuple(
            (v,) for v in (-(E**2), -math.pi, -c.SQRT2, E, 3.0 * c.SQRT2, 2.0 * E**2, 4.0 * math.pi, E**3)
        ),
        measure=lambda x: float(x[0]) - 4.0,
        thresholds=(5e-3, 5e-6, 5e-9),
        max_iterations=201,
    ),
    4: TableSpec(
        table=4,
        problem=ProblemId.DIM2,
        labels=("(-2,2)", "(-1/100,e^2)", "(-pi/2,7/4)", "(-pi/4,e^1/2)", "(1/4,1/4)",
                "(3pi/2,1/sqrt8)", "(e^2,2pi)", "(e^2,-1/11)"),
        starts=(
            (-2.0, 2.0),
            (-0.01, E**2),
            (-math.pi / 2.0, 1.75),
            (-math.pi / 4.0, math.sqrt(E)),
            (0.25, 0.25),
            (1.5 * math.pi, 1.0 / math.sqrt(8.0)),
            (E**2, c.TWO_PI),
            (E**2, -1.0 / 11.0),
        ),
        measure=lambda x: float(np.max(np.abs(x))),
        thresholds=(5e-2, 5e-5, 5e-8),
    ),
}

# Hard-coded starts of the desk problems, used by `--start auto:<i>`
DESK_STARTS: Dict[ProblemId, Tuple[Tuple[float, ...], ...]] = {
    spec.problem: spec.starts for spec in DESK_TABLES.values()
}


def list_problems() -> List[Dict]:
    """One summary dict per problem: id, dimensions, index box, optimum."""
    rows = []
    for pid in ProblemId:
        problem = make_problem(pid)
        optimum = problem.known_optimum
        lower, upper = INDEX_BOXES[pid]
        rows.append(
            {
                "id": pid.value,
                "dim_y": problem.dim_y,
                "dim_x": problem.dim_x,
                "index_box": f"[{lower:g}, {upper:g}]^{problem.dim_x}",
                "poll_radius": POLL_RADIUS[pid],
                "optimum_x": optimum.x.tolist() if optimum else None,
                "optimum_value": optimum.value if optimum else None,
                "attained": optimum.attained if optimum else None,
                "description": problem.description,
            }
        )
    return rows
