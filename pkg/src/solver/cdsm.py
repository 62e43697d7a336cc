"""
Covering direct search method (cDSM).

Each iteration runs, in order:
    covering step: evaluate the trial point of the unit ball around the
        incumbent that lies farthest from every point evaluated so far;
    search step: evaluate user-provided trial points (skipped by default);
    poll step: evaluate the 2n points of a random orthogonal maximal positive
        basis of length delta;
    update step: move and expand delta by `expand` on strict improvement,
        otherwise stay and shrink delta by `shrink`.
The first step producing a strict decrease ends the iteration.
"""

import logging
import math
from dataclasses import asdict, dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd
from sklearn.metrics import pairwise_distances

from ..pof.core import check_extended_real
from ..pof.errors import InfeasibleStartError

logger = logging.getLogger(__name__)

Vector = np.ndarray
Objective = Callable[[Vector], float]


class StepKind(str, Enum):
    INITIAL = "initial"
    COVERING = "covering"
    SEARCH = "search"
    POLL = "poll"


class StopReason(str, Enum):
    RADIUS = "radius"
    ITERATIONS = "iterations"
    BUDGET = "budget"


@dataclass(frozen=True)
class SolverConfig:
    """
    Parameters of the cDSM.

    Attributes:
        delta0: Initial poll radius
        shrink: Poll radius shrinking factor (lambda), in ]0, 1[
        expand: Poll radius expanding factor (upsilon), >= 1
        delta_min: Stop as soon as the poll radius drops below this value
        max_iterations: Safety cap on the number of iterations
        covering_samples: Candidates drawn in the unit ball per covering step
        covering_radius: Radius of the covering ball
        covering: Run the covering step (disabled for the plain DSM baseline)
        seed: Seed of the run's random stream
    """

    delta0: float = 1.0
    shrink: float = 0.5
    expand: float = 1.0
    delta_min: float = 1e-10
    max_iterations: int = 100000
    covering_samples: int = 64
    covering_radius: float = 1.0
    covering: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.shrink < 1.0 <= self.expand:
            raise ValueError(f"need 0 < shrink < 1 <= expand, got ({self.shrink}, {self.expand})")
        if not 0.0 < self.delta_min < self.delta0:
            raise ValueError(f"need 0 < delta_min < delta0, got ({self.delta_min}, {self.delta0})")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.covering_samples < 1:
            raise ValueError("covering_samples must be positive")
        if self.covering_radius <= 0:
            raise ValueError("covering_radius must be positive")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, values: Dict) -> "SolverConfig":
        """Build a config from a mapping, ignoring unknown keys."""
        known = {name: values[name] for name in cls.__dataclass_fields__ if name in values}
        return cls(**known)

    def to_dict(self) -> Dict:
        return asdict(self)


class History:
    """Append-only record of every evaluated point and its value."""

    def __init__(self, dim: int, capacity: int = 256):
        self.dim = dim
        self._points = np.empty((capacity, dim))
        self._values: List[float] = []

    def __len__(self) -> int:
        return len(self._values)

    def append(self, x: Vector, value: float):
        n = len(self._values)
        if n == self._points.shape[0]:
            grown = np.empty((2 * n, self.dim))
            grown[:n] = self._points
            self._points = grown
        self._points[n] = x
        self._values.append(value)

    @property
    def points(self) -> Vector:
        view = self._points[: len(self._values)]
        view.setflags(write=False)
        return view

    @property
    def values(self) -> List[float]:
        return list(self._values)

    def distances(self, candidates: Vector) -> Vector:
        """Euclidean distance from each candidate to the nearest history point."""
        return pairwise_distances(np.atleast_2d(candidates), self.points).min(axis=1)


@dataclass(frozen=True)
class IterationState:
    k: int
    x: Vector
    value: float
    delta: float


@dataclass(frozen=True)
class EvaluationRecord:
    eval_index: int
    step_kind: StepKind
    x: Vector
    value: float
    cumulative_cost: float
    best_so_far: float


@dataclass
class RunTrace:
    """
    Evaluation stream of one run and its outcome.

    `states` holds the iteration state before the first iteration and after
    every update step; `improvements[k]` tells whether iteration k moved.
    """

    records: List[EvaluationRecord]
    states: List[IterationState]
    improvements: List[bool]
    x_best: Vector
    value_best: float
    iterations: int
    stop_reason: StopReason
    recovered_y: Optional[Vector] = None
    recovered_value: Optional[float] = None
    metadata: Dict = field(default_factory=dict)

    @property
    def evaluations(self) -> int:
        return len(self.records)

    @property
    def total_cost(self) -> float:
        return self.records[-1].cumulative_cost if self.records else 0.0

    def to_frame(self) -> pd.DataFrame:
        """One row per evaluation, x kept as a list per row."""
        return pd.DataFrame(
            {
                "eval_index": [r.eval_index for r in self.records],
                "step_kind": [r.step_kind.value for r in self.records],
                "cumulative_cost": [r.cumulative_cost for r in self.records],
                "value": [r.value for r in self.records],
                "best_so_far": [r.best_so_far for r in self.records],
                "x": [r.x.tolist() for r in self.records],
            }
        )


def random_orthogonal_positive_basis(n: int, delta: float, rng: np.random.Generator) -> Vector:
    """
    Maximal positive basis [delta*q_1..delta*q_n, -delta*q_1..-delta*q_n].

    Q is Haar distributed: QR factorization of a standard normal matrix with
    the signs fixed so that R has a positive diagonal.

    Returns:
        Array of shape (2n, n), one direction per row
    """
    if n < 1 or delta <= 0:
        raise ValueError("need n >= 1 and delta > 0")
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs
    directions = delta * q.T
    return np.vstack([directions, -directions])


def sample_unit_ball(n: int, samples: int, rng: np.random.Generator, radius: float = 1.0) -> Vector:
    """Uniform samples in the closed ball: uniform direction, radius U^(1/n)."""
    directions = rng.standard_normal((samples, n))
    norms = np.linalg.norm(directions, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    radii = radius * rng.random((samples, 1)) ** (1.0 / n)
    return directions / norms * radii


def covering_candidate_from(x_k: Vector, history: History, directions: Vector) -> Vector:
    """x_k + d for the direction d whose trial point is farthest from the history."""
    candidates = np.asarray(x_k, dtype=float) + np.atleast_2d(directions)
    return candidates[int(np.argmax(history.distances(candidates)))]


def covering_candidate(
    x_k: Vector,
    history: History,
    delta: float,
    rng: np.random.Generator,
    samples: int,
    radius: float = 1.0,
) -> Vector:
    """
    Covering trial point around x_k.

    The argmax of dist(x_k + d, history) over the ball is approximated on
    `samples` uniform draws in the ball of the given radius; ties go to the
    first draw. The ball does not shrink with the poll radius delta.
    """
    if len(history) == 0:
        raise ValueError("covering step needs a non-empty history")
    if not delta > 0:
        raise ValueError(f"poll radius must be positive, got {delta}")
    directions = sample_unit_ball(len(x_k), samples, rng, radius)
    return covering_candidate_from(x_k, history, directions)


def argmin_first(values: Iterable[float]) -> int:
    """Index of the smallest value, the first one on ties."""
    values = np.asarray(list(values), dtype=float)
    if values.size == 0:
        raise ValueError("argmin of an empty sequence")
    return int(np.argmin(values))


def update_step(
    state: IterationState,
    trial_x: Vector,
    trial_value: float,
    improved: bool,
    config: SolverConfig,
) -> IterationState:
    """Move to the trial point and expand, or stay and shrink."""
    if improved:
        return IterationState(state.k + 1, trial_x, trial_value, config.expand * state.delta)
    return IterationState(state.k + 1, state.x, state.value, config.shrink * state.delta)


class _BudgetExhausted(Exception):
    pass


class CDSMSolver:
    """
    Covering direct search on an extended-real objective.

    Args:
        config: Solver parameters
        cost_per_eval: Units charged for each objective evaluation
        budget: Optional total budget in units; an evaluation that would
            exceed it is not performed
        search_hook: Optional map from the iteration state to trial points
    """

    def __init__(
        self,
        config: SolverConfig,
        cost_per_eval: float = 1.0,
        budget: Optional[float] = None,
        search_hook: Optional[Callable[[IterationState], Iterable[Vector]]] = None,
    ):
        if cost_per_eval <= 0:
            raise ValueError("cost_per_eval must be positive")
        self.config = config
        self.cost_per_eval = cost_per_eval
        self.budget = budget
        self.search_hook = search_hook

    def _evaluate(self, objective: Objective, x: Vector, kind: StepKind) -> float:
        n_evals = len(self._records) + 1
        cost = n_evals * self.cost_per_eval
        if self.budget is not None and cost > self.budget:
            raise _BudgetExhausted()
        value = check_extended_real(objective(x))
        self._history.append(x, value)
        self._best = min(self._best, value)
        self._records.append(EvaluationRecord(n_evals - 1, kind, x, value, cost, self._best))
        return value

    def _best_of(self, objective: Objective, points: List[Vector], kind: StepKind, incumbent: float):
        if not points:
            return None
        values = [self._evaluate(objective, p, kind) for p in points]
        i = argmin_first(values)
        if values[i] < incumbent:
            return points[i], values[i]
        return None

    def solve(self, objective: Objective, x0) -> RunTrace:
        config = self.config
        rng = np.random.default_rng(config.seed)
        x0 = np.array(x0, dtype=float).reshape(-1)
        n = x0.size

        self._history = History(n)
        self._records: List[EvaluationRecord] = []
        self._best = math.inf

        try:
            v0 = self._evaluate(objective, x0, StepKind.INITIAL)
        except _BudgetExhausted:
            raise ValueError("budget does not cover the evaluation of the starting point")
        if not math.isfinite(v0):
            raise InfeasibleStartError(f"objective at the starting point is {v0}")

        state = IterationState(0, x0, v0, config.delta0)
        states = [state]
        improvements: List[bool] = []

        stop_reason = None
        while stop_reason is None:
            if state.delta < config.delta_min:
                stop_reason = StopReason.RADIUS
                break
            if state.k >= config.max_iterations:
                stop_reason = StopReason.ITERATIONS
                break
            try:
                trial = None
                if config.covering:
                    candidate = covering_candidate(
                        state.x, self._history, state.delta, rng, config.covering_samples, config.covering_radius
                    )
                    trial = self._best_of(objective, [candidate], StepKind.COVERING, state.value)
                if trial is None and self.search_hook is not None:
                    points = [np.asarray(p, dtype=float).reshape(-1) for p in self.search_hook(state)]
                    trial = self._best_of(objective, points, StepKind.SEARCH, state.value)
                if trial is None:
                    basis = random_orthogonal_positive_basis(n, state.delta, rng)
                    trial = self._best_of(objective, list(state.x + basis), StepKind.POLL, state.value)
            except _BudgetExhausted:
                stop_reason = StopReason.BUDGET
                break

            improved = trial is not None
            trial_x, trial_value = trial if improved else (state.x, state.value)
            state = update_step(state, trial_x, trial_value, improved, config)
            states.append(state)
            improvements.append(improved)
            logger.debug(
                f"k={state.k} delta={state.delta:.3e} value={state.value:.6e} improved={improved}"
            )

        values = [r.value for r in self._records]
        best = self._records[argmin_first(values)]
        logger.info(
            f"cDSM stopped ({stop_reason.value}) after {state.k} iterations, "
            f"{len(self._records)} evaluations, best value {best.value:.6e}"
        )
        return RunTrace(
            records=self._records,
            states=states,
            improvements=improvements,
            x_best=best.x,
            value_best=best.value,
            iterations=state.k,
            stop_reason=stop_reason,
            metadata={"config": config.to_dict(), "cost_per_eval": self.cost_per_eval, "budget": self.budget},
        )


def solve(
    objective: Objective,
    x0,
    config: Optional[SolverConfig] = None,
    cost_per_eval: float = 1.0,
    budget: Optional[float] = None,
    search_hook: Optional[Callable[[IterationState], Iterable[Vector]]] = None,
) -> RunTrace:
    """
    Minimize `objective` from x0 with the cDSM.

    Raises:
        InfeasibleStartError: if objective(x0) is not finite
    """
    solver = CDSMSolver(config or SolverConfig(), cost_per_eval, budget, search_hook)
    return solver.solve(objective, x0)


def without_covering(config: SolverConfig) -> SolverConfig:
    """Same parameters with the covering step disabled (plain DSM)."""
    return replace(config, covering=False)
