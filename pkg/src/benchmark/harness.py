"""
Benchmark protocol for the large-dimensional problems.

One evaluation of phi costs 1 unit and one evaluation of the reformulated
objective Phi costs 1 + tau units. Each start y0 of a multistart plan gives
a reformulated run from chi(y0) and, optionally, a baseline run of the plain
DSM on the extreme barrier of phi in the full space.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from ..pof.core import BarrierObjective, PartitionedProblem, ReformulatedObjective
from ..pof.errors import InfeasibleStartError
from ..problems.catalog import ProblemId, make_problem, parse_problem_id
from ..problems.components import HEAVY_DIM, TWO_PI
from ..solver.cdsm import RunTrace, SolverConfig, solve, without_covering

logger = logging.getLogger(__name__)

REFORMULATED = "reformulated"
BASELINE = "baseline"
METHODS = (REFORMULATED, BASELINE)


@dataclass(frozen=True)
class CostModel:
    """Units charged per evaluation: 1 for phi, 1 + tau for Phi."""

    tau: float = 0.0
    phi_cost: float = 1.0

    def __post_init__(self):
        if not self.tau >= 0 or not math.isfinite(self.tau):
            raise ValueError(f"tau must be a finite nonnegative number, got {self.tau}")

    @property
    def reformulated_cost(self) -> float:
        return self.phi_cost + self.tau


@dataclass(frozen=True)
class ProfilePoint:
    cumulative_cost: float
    best_value: float


@dataclass
class MultistartPlan:
    """
    Starts of one comparison and the budget given to every run.

    Attributes:
        problem: Problem identifier
        starts: Full-space starting points y0
        base_seed: Seed from which every run seed is derived
        budget: Units available to each run
        tau: Relative cost of the oracle
        baseline: Also run the full-space DSM from each start
    """

    problem: ProblemId
    starts: List[np.ndarray]
    base_seed: int = 0
    budget: float = 5000.0
    tau: float = 0.0
    baseline: bool = False

    def __post_init__(self):
        self.problem = parse_problem_id(self.problem)
        if not self.starts:
            raise ValueError("a plan needs at least one start")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        problem = make_problem(self.problem)
        self.starts = [np.asarray(y0, dtype=float).reshape(-1) for y0 in self.starts]
        for i, y0 in enumerate(self.starts):
            if y0.size != problem.dim_y or not problem.in_box_y(y0):
                raise ValueError(f"start {i} is outside the full-space box of {problem.id}")

    @property
    def cost_model(self) -> CostModel:
        return CostModel(self.tau)


@dataclass
class PlanRun:
    start_index: int
    method: str
    seed: int
    trace: Optional[RunTrace] = None
    error: Optional[str] = None

    @property
    def succeeded(self) -> bool:
        return self.trace is not None


def run_seed(base_seed: int, start_index: int, method_index: int) -> int:
    """Seed of one run, derived from the plan seed, the start and the method."""
    sequence = np.random.SeedSequence([int(base_seed), int(start_index), int(method_index)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def generate_starts(problem_id, count: int, rng=None) -> List[np.ndarray]:
    """
    Full-space starting points following each problem's sampling scheme.

    heavy_mono: uniform over [-30, 30]^101; heavy_radial: uniform over
    [0, 2pi]^101; heavy_dim2: uniform over [-5, 5]^100; heavy_nonlinear: the
    three deterministic points (i/100), 0.5*1, (2i/100), then points whose
    j-th component is uniform in [(j-1)/100, j/100]. Desk problems draw
    uniformly in their full-space box.

    Args:
        problem_id: Problem identifier
        count: Number of starts
        rng: numpy Generator or seed
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    pid = parse_problem_id(problem_id)
    rng = np.random.default_rng(rng)
    problem = make_problem(pid)

    if pid is ProblemId.HEAVY_NONLINEAR:
        i = np.arange(1, HEAVY_DIM + 1, dtype=float)
        fixed = [i / 100.0, np.full(HEAVY_DIM, 0.5), 2.0 * i / 100.0]
        starts = fixed[:count]
        lower, upper = (i - 1.0) / 100.0, i / 100.0
        for _ in range(count - len(starts)):
            starts.append(np.maximum(rng.uniform(lower, upper), problem.box_y[0]))
        return starts

    if pid is ProblemId.HEAVY_MONO:
        lower, upper = -30.0, 30.0
    elif pid is ProblemId.HEAVY_RADIAL:
        lower, upper = 0.0, TWO_PI
    elif pid is ProblemId.HEAVY_DIM2:
        lower, upper = -5.0, 5.0
    else:
        lower, upper = problem.box_y
    starts = [rng.uniform(lower, upper, problem.dim_y) for _ in range(count)]
    if pid in (ProblemId.RADIAL, ProblemId.HEAVY_RADIAL):
        # angles live in [0, 2pi)
        for y0 in starts:
            y0[1:] = np.minimum(y0[1:], np.nextafter(TWO_PI, 0.0))
    return starts


def _attach(trace: RunTrace, problem: PartitionedProblem, method: str, model: CostModel, budget) -> RunTrace:
    trace.metadata.update({"problem": problem.id, "method": method, "tau": model.tau, "budget": budget})
    return trace


def run_reformulated_index(
    problem: PartitionedProblem,
    x0,
    config: SolverConfig,
    model: CostModel = CostModel(),
    budget: Optional[float] = None,
) -> RunTrace:
    """
    cDSM on Phi from the index x0.

    The returned trace carries gamma(x_best) and its phi value.

    Raises:
        InfeasibleStartError: if x0 is outside the index box or Phi(x0) = +inf
    """
    x0 = np.asarray(x0, dtype=float).reshape(-1)
    if x0.size != problem.dim_x or not problem.in_box_x(x0):
        raise InfeasibleStartError(f"{problem.id}: index start {x0.tolist()} is outside the index box")
    objective = ReformulatedObjective(problem)
    trace = solve(objective, x0, config, model.reformulated_cost, budget)
    trace.recovered_y = objective.recover(trace.x_best)
    if trace.recovered_y is not None:
        trace.recovered_value = float(problem.phi(trace.recovered_y))
    return _attach(trace, problem, REFORMULATED, model, budget)


def run_reformulated(
    problem: PartitionedProblem,
    y0,
    config: SolverConfig,
    model: CostModel = CostModel(),
    budget: Optional[float] = None,
) -> RunTrace:
    """cDSM on Phi from chi(y0)."""
    y0 = np.asarray(y0, dtype=float).reshape(-1)
    x0 = np.asarray(problem.chi(y0), dtype=float).reshape(-1)
    return run_reformulated_index(problem, x0, config, model, budget)


def run_baseline(
    problem: PartitionedProblem,
    y0,
    config: SolverConfig,
    model: CostModel = CostModel(),
    budget: Optional[float] = None,
) -> RunTrace:
    """
    Plain DSM (no covering step) on the barrier of phi over Omega n box_Y.

    Raises:
        InfeasibleStartError: if y0 is outside Omega n box_Y
    """
    y0 = np.asarray(y0, dtype=float).reshape(-1)
    if y0.size != problem.dim_y or not problem.in_box_y(y0):
        raise InfeasibleStartError(f"{problem.id}: start is outside the full-space box")
    trace = solve(BarrierObjective(problem), y0, without_covering(config), model.phi_cost, budget)
    return _attach(trace, problem, BASELINE, model, budget)


def convergence_profile(trace: RunTrace) -> List[ProfilePoint]:
    """
    Best value found versus units spent, one point per distinct cost.

    Raises:
        ValueError: for an empty trace
    """
    if not trace.records:
        raise ValueError("cannot build a profile from an empty trace")
    profile: List[ProfilePoint] = []
    for record in trace.records:
        point = ProfilePoint(record.cumulative_cost, record.best_so_far)
        if profile and profile[-1].cumulative_cost == point.cumulative_cost:
            profile[-1] = point
        else:
            profile.append(point)
    return profile


def profile_frame(profile: Sequence[ProfilePoint]) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "cumulative_cost": [p.cumulative_cost for p in profile],
            "best_value": [p.best_value for p in profile],
        }
    )


def run_plan(plan: MultistartPlan, config: SolverConfig, max_workers: int = 1) -> List[PlanRun]:
    """
    Run every start of a plan, reformulated first then baseline.

    A failing run is logged and reported in its PlanRun; the others still run.
    Results come back in start order whatever the number of workers.
    """
    problem = make_problem(plan.problem)
    model = plan.cost_model
    methods = METHODS if plan.baseline else (REFORMULATED,)
    jobs = [(i, m) for i in range(len(plan.starts)) for m in methods]

    def execute(job) -> PlanRun:
        start_index, method = job
        seed = run_seed(plan.base_seed, start_index, METHODS.index(method))
        run_config = SolverConfig.from_dict({**config.to_dict(), "seed": seed})
        runner = run_reformulated if method == REFORMULATED else run_baseline
        try:
            trace = runner(problem, plan.starts[start_index], run_config, model, plan.budget)
        except Exception as e:
            logger.error(f"{plan.problem.value} start {start_index} ({method}) failed: {e}")
            return PlanRun(start_index, method, seed, error=str(e))
        trace.metadata.update({"start_index": start_index, "seed": seed})
        logger.info(
            f"{plan.problem.value} start {start_index} ({method}): best {trace.value_best:.6e} "
            f"after {trace.total_cost:g} units"
        )
        return PlanRun(start_index, method, seed, trace)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(execute, jobs))
    return [execute(job) for job in jobs]


@dataclass
class PlanSummary:
    """Final best values per method of a plan."""

    reformulated: List[float] = field(default_factory=list)
    baseline: List[float] = field(default_factory=list)

    @classmethod
    def from_runs(cls, runs: Sequence[PlanRun]) -> "PlanSummary":
        summary = cls()
        for run in runs:
            if run.succeeded:
                getattr(summary, run.method).append(run.trace.value_best)
        return summary

    def median(self, method: str) -> float:
        values = getattr(self, method)
        return float(np.median(values)) if values else math.inf
