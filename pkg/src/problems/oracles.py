"""
Dichotomic-search oracles.

Two problems have fiber minimizers without closed form:
    dim2: M(x) = min{M >= 0 : I_x(M) nonempty} is found by bisection on the
        monotone feasibility of the interval intersection I_x(M), and
        T(x) is read off the (almost) singleton I_x(M(x));
    heavy_dim2: each g_j is strictly increasing, so g_j^-1(w) is found by
        bisection on a doubling bracket.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from ..pof.errors import BracketError
from .components import DIM2_BLOCKS, G_BASES, dim2_fiber_point, heavy_dim2_g

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    empty: bool = False

    def __post_init__(self):
        if not self.empty and self.lo > self.hi:
            raise ValueError(f"nonempty interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def midpoint(self) -> float:
        if self.empty:
            raise ValueError("empty interval has no midpoint")
        return 0.5 * (self.lo + self.hi)

    def contains(self, other: "Interval") -> bool:
        if other.empty:
            return True
        return not self.empty and self.lo <= other.lo and other.hi <= self.hi


@dataclass(frozen=True)
class BisectionSpec:
    """
    Parameters of the dichotomic searches.

    Attributes:
        tolerance: Stop once the bracket width is at most this value
        max_bracket_scan: Largest integer M tried when bracketing M(x)
        max_doublings: Largest number of doublings of the g^-1 bracket
    """

    tolerance: float = 2.0**-30
    max_bracket_scan: int = 1000
    max_doublings: int = 200

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_bracket_scan < 1 or self.max_doublings < 1:
            raise ValueError("bracket limits must be positive")


HEAVY_DIM2_BISECTION = BisectionSpec(tolerance=2.0**-40)


@dataclass
class BisectionResult:
    """Final bracket [lo, hi] of a dichotomic search and the width of every iterate."""

    lo: float
    hi: float
    widths: List[float] = field(default_factory=list)

    @property
    def iterations(self) -> int:
        return len(self.widths) - 1

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)


def bisect_threshold(
    predicate: Callable[[float], bool], lo: float, hi: float, tolerance: float
) -> BisectionResult:
    """
    Locate the threshold of a monotone predicate.

    The predicate must be False at lo and True at hi (or lo == hi). Each
    iteration keeps the half of the bracket that still straddles the
    threshold.

    Args:
        predicate: Monotone test, False below the threshold and True above
        lo: Lower end of the bracket
        hi: Upper end of the bracket
        tolerance: Stop once hi - lo <= tolerance

    Returns:
        BisectionResult with the final bracket and the widths history
    """
    if lo > hi:
        raise ValueError(f"bracket [{lo}, {hi}] is reversed")
    widths = [hi - lo]
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if predicate(mid):
            hi = mid
        else:
            lo = mid
        widths.append(hi - lo)
    return BisectionResult(lo, hi, widths)


# -- dim2 ---------------------------------------------------------------------


def dim2_intervals(x, M: float) -> Interval:
    """
    I_x(M) = [-M, M] n [cbrt(-M - x1), cbrt(M - x1)] n [-M^3 + x2, M^3 + x2].

    The intersection grows with M.
    """
    if M < 0:
        raise ValueError(f"M must be nonnegative, got {M}")
    x1, x2 = (float(v) for v in x)
    cube = M**3
    lo = max(-M, float(np.cbrt(-M - x1)), -cube + x2)
    hi = min(M, float(np.cbrt(M - x1)), cube + x2)
    if lo > hi:
        return Interval(lo, hi, empty=True)
    return Interval(lo, hi)


@dataclass(frozen=True)
class Dim2OracleResult:
    M_hat: float
    T_hat: float
    y_hat: np.ndarray
    bracket: Tuple[float, float]


def dim2_oracle(x, spec: BisectionSpec = BisectionSpec()) -> Dim2OracleResult:
    """
    Approximate (M(x), T(x)) and the fiber minimizer s_x(T(x)).

    The integer scan M = 0, 1, 2, ... finds the first feasible integer m,
    then M(x) is bisected on [max(m - 1, 0), m] down to spec.tolerance.
    M_hat is the bracket midpoint and T_hat the midpoint of I_x(M_hat), or of
    I_x(M_sup) when M_hat is still infeasible.

    Raises:
        BracketError: if no feasible integer M <= spec.max_bracket_scan exists
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != 2 or not np.all(np.isfinite(x)):
        raise ValueError(f"dim2 oracle needs a finite 2-vector, got {x.tolist()}")

    m = next((m for m in range(spec.max_bracket_scan + 1) if not dim2_intervals(x, m).empty), None)
    if m is None:
        logger.warning(f"no feasible M up to {spec.max_bracket_scan} for x={x.tolist()}")
        raise BracketError(f"dim2 bracket scan exhausted at M={spec.max_bracket_scan} for x={x.tolist()}")
    logger.debug(f"dim2 bracket for x={x.tolist()}: M in [{max(m - 1, 0)}, {m}]")

    if m == 0:
        search = BisectionResult(0.0, 0.0, [0.0])
    else:
        search = bisect_threshold(
            lambda M: not dim2_intervals(x, M).empty, float(m - 1), float(m), spec.tolerance
        )
    M_hat = search.midpoint
    interval = dim2_intervals(x, M_hat)
    if interval.empty:
        interval = dim2_intervals(x, search.hi)
    T_hat = interval.midpoint
    return Dim2OracleResult(M_hat, T_hat, dim2_fiber_point(x, T_hat), (search.lo, search.hi))


def dim2_brute_force_M(x, upper: float = 20.0, step: float = 1e-4) -> float:
    """Smallest grid value M in [0, upper] with I_x(M) nonempty, +inf if none."""
    x1, x2 = (float(v) for v in x)
    grid = np.arange(0.0, upper + step, step)
    cube = grid**3
    lo = np.maximum.reduce([-grid, np.cbrt(-grid - x1), -cube + x2])
    hi = np.minimum.reduce([grid, np.cbrt(grid - x1), cube + x2])
    feasible = np.flatnonzero(lo <= hi)
    return float(grid[feasible[0]]) if feasible.size else math.inf


# -- heavy_dim2 -----------------------------------------------------------------


def _g_bracket(j: int, w: float, spec: BisectionSpec) -> float:
    B = 1.0
    for _ in range(spec.max_doublings + 1):
        if heavy_dim2_g(j, -B) <= w <= heavy_dim2_g(j, B):
            return B
        B *= 2.0
    raise BracketError(f"g_{j}^-1({w}): no bracket after {spec.max_doublings} doublings")


def heavy_dim2_g_inverse(j: int, w: float, spec: BisectionSpec = HEAVY_DIM2_BISECTION) -> float:
    """
    z with g_j(z) = w, up to the bisection tolerance.

    Raises:
        BracketError: if [-B, B] never brackets w
    """
    w = float(w)
    if not math.isfinite(w):
        raise ValueError(f"g inverse needs a finite value, got {w}")
    B = _g_bracket(j, w, spec)
    lo, hi = -B, B
    while hi - lo > spec.tolerance:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        value = heavy_dim2_g(j, mid)
        if value == w:
            return mid
        if value < w:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def heavy_dim2_g_inverse_all(w, spec: BisectionSpec = HEAVY_DIM2_BISECTION) -> np.ndarray:
    """
    (g_1^-1(w_1), ..., g_10^-1(w_10)), bisected together.

    Component-wise identical to heavy_dim2_g_inverse.
    """
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.size != DIM2_BLOCKS or not np.all(np.isfinite(w)):
        raise ValueError(f"g inverse needs {DIM2_BLOCKS} finite values")
    B = np.array([_g_bracket(j, w[j - 1], spec) for j in range(1, DIM2_BLOCKS + 1)])
    lo, hi = -B, B.copy()
    active = hi - lo > spec.tolerance
    while np.any(active):
        mid = 0.5 * (lo + hi)
        active &= (mid > lo) & (mid < hi)
        with np.errstate(over="ignore"):
            value = mid + np.power(G_BASES, mid) - 1.0
        hit = active & (value == w)
        lo = np.where(hit, mid, lo)
        hi = np.where(hit, mid, hi)
        below = active & ~hit & (value < w)
        above = active & ~hit & (value > w)
        lo = np.where(below, mid, lo)
        hi = np.where(above, mid, hi)
        active &= hi - lo > spec.tolerance
    return 0.5 * (lo + hi)
