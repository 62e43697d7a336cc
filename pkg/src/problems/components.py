"""
Blackbox components of the benchmark problems.

Each problem combines an explicit part (the composite map f, the fiber
structure) with hidden pieces sigma and epsilon. The hidden pieces are only
reached through the problem's phi and oracle; the solver never sees them.
"""

import math
from typing import Tuple

import numpy as np

TWO_PI = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)

HEAVY_DIM = 100
DIM2_BLOCKS = 10


def floorceil(x):
    """floor(x) for x <= 0, ceil(x) - 1 for x > 0."""
    if np.ndim(x) == 0:
        x = float(x)
        return int(math.floor(x)) if x <= 0 else int(math.ceil(x)) - 1
    x = np.asarray(x, dtype=float)
    return np.where(x <= 0, np.floor(x), np.ceil(x) - 1.0)


def mod_2pi(theta):
    """Residual of theta modulo 2*pi, in [0, 2*pi)."""
    r = np.mod(theta, TWO_PI)
    if np.ndim(r) == 0:
        r = float(r)
        return 0.0 if r >= TWO_PI else r
    r = np.asarray(r, dtype=float)
    r[r >= TWO_PI] = 0.0
    return r


# -- monovariable noise -------------------------------------------------------


def mono_sigma(x: float) -> float:
    return 2.0 * floorceil(x)


def mono_epsilon(x: float) -> float:
    """|x| * sqrt(1 + sin(2 pi / x)^2) + |floorceil(x)|, with epsilon(0) = 0."""
    x = float(x)
    if x == 0.0:
        return 0.0
    return abs(x) * math.sqrt(1.0 + math.sin(TWO_PI / x) ** 2) + abs(floorceil(x))


# -- radial noise -------------------------------------------------------------


def radial_sigma(x: float) -> float:
    if x < 0:
        raise ValueError(f"radial sigma is defined on R+, got {x}")
    if x == 0:
        return 0.0
    return math.pi - TWO_PI * math.log2(x)


def radial_epsilon(x: float) -> float:
    if x < 0:
        raise ValueError(f"radial epsilon is defined on R+, got {x}")
    # (x - sqrt2)(x + sqrt2) instead of x^2 - 2 so that epsilon(sqrt2) is exactly 0
    return math.sqrt(abs((x - SQRT2) * (x + SQRT2))) + math.sin(10.0 * math.pi * (x - SQRT2)) ** 2 / 10.0


def radial_components(x: float) -> Tuple[float, float]:
    """(sigma(x), epsilon(x)) of the radial problem."""
    return radial_sigma(x), radial_epsilon(x)


# -- nonlinear noise ----------------------------------------------------------

_EXP_OVERFLOW = 709.0


def nonlinear_epsilon(z: float) -> float:
    """exp(1/(z-4)) + sqrt(|z-4|)/5, +inf at z = 4."""
    z = float(z)
    if z == 4.0:
        return math.inf
    exponent = 1.0 / (z - 4.0)
    if exponent > _EXP_OVERFLOW:
        return math.inf
    return math.exp(exponent) + math.sqrt(abs(z - 4.0)) / 5.0


def nonlinear_gamma(x: float) -> np.ndarray:
    """Closed-form fiber minimizer, y1 > 0 and y1 * y2 = x."""
    x = float(x)
    root = math.sqrt(1.0 + 4.0 * x * x)
    return np.array([math.sqrt((1.0 + root) / 2.0), x * math.sqrt(2.0 / (1.0 + root))])


# ulp moves tried when pulling a fiber point exactly onto its index
_ULP_STEPS = 256


def nonlinear_fiber_point(x: float) -> np.ndarray:
    """
    nonlinear_gamma(x) moved by a few ulps so that y1 * y2 == x in floating point.

    The smooth term stays far below the resolution of epsilon(x), so phi at
    this point rounds to epsilon(x) exactly.
    """
    x = float(x)
    y1, y2 = (float(v) for v in nonlinear_gamma(x))
    if y1 * y2 == x:
        return np.array([y1, y2])
    for _ in range(_ULP_STEPS):
        s = x / y1
        for candidate in (s, math.nextafter(s, -math.inf), math.nextafter(s, math.inf)):
            if y1 * candidate == x:
                return np.array([y1, candidate])
        y1 = math.nextafter(y1, math.inf)
    return nonlinear_gamma(x)


# -- two-dimensional noise ----------------------------------------------------


def dim2_f(y) -> np.ndarray:
    y1, y2, y3 = np.asarray(y, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        return np.array([y2 - y1**3, y1 - y3**3])


def _finite_square(value: float) -> float:
    # sine of an overflowed argument: the point is too far to matter
    if not math.isfinite(value):
        return math.inf
    return value * value


def dim2_epsilon(x) -> float:
    x1, x2 = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        value = (
            np.sin(10.0 * math.pi * (x2 - x1**3)) / 5.0
            + np.sin(6.0 * math.pi * (x2 - np.exp(-x1) + 1.0)) / 7.0
            + np.sin(12.0 * math.pi * math.hypot(x1, x2)) / 11.0
        )
    return _finite_square(float(value))


def dim2_fiber_point(x, t: float) -> np.ndarray:
    """s_x(t) = (t, t^3 + x1, cbrt(t - x2)), the fiber of x parametrized by t."""
    x1, x2 = (float(v) for v in x)
    return np.array([t, t**3 + x1, float(np.cbrt(t - x2))])


# -- 101-dimensional monovariable noise ----------------------------------------

_I_FLOOR = np.arange(1, 26, dtype=float)
_I_SINE = np.arange(26, 51, dtype=float)
_I_SHIFT = np.arange(51, 76, dtype=float)
_I_CONST = np.arange(76, 101, dtype=float)


def heavy_mono_sigma(x: float) -> np.ndarray:
    """
    The 101 components (x, floor block, sine block, shift block, constant block).

    Args:
        x: Value of the free variable y0

    Returns:
        Array of shape (101,)
    """
    x = float(x)
    return np.concatenate(
        [
            [x],
            2.0 * (1.0 + (_I_FLOOR - 1.0) / 5.0) * floorceil(x / _I_FLOOR),
            25.0 * np.sin((_I_SINE - 25.0) * math.pi * x / 5.0),
            x - 10.0 / _I_SHIFT,
            _I_CONST / 10.0,
        ]
    )


# -- 101-dimensional radial noise ----------------------------------------------

_LOG_BASES = np.log(np.arange(2, HEAVY_DIM + 2, dtype=float))


def heavy_radial_sigma(x: float) -> np.ndarray:
    """(2 pi log_{i+1}(x)) for i = 1..100, and the zero vector at x = 0."""
    if x < 0:
        raise ValueError(f"heavy radial sigma is defined on R+, got {x}")
    if x == 0:
        return np.zeros(HEAVY_DIM)
    return TWO_PI * math.log(x) / _LOG_BASES


# -- nonlinear combination of 100 variables ----------------------------------------


def heavy_nonlinear_products(y) -> np.ndarray:
    """Products of the twenty consecutive blocks of five components."""
    return np.asarray(y, dtype=float).reshape(20, 5).prod(axis=1)


def heavy_nonlinear_combine(products) -> float:
    """Sum of the block products divided by 5, correctly rounded."""
    return math.fsum(np.asarray(products, dtype=float) / 5.0)


def heavy_nonlinear_f(y) -> float:
    return heavy_nonlinear_combine(heavy_nonlinear_products(y))


def heavy_nonlinear_gamma(x: float) -> np.ndarray:
    return np.full(HEAVY_DIM, (float(x) / 4.0) ** 0.2)


def heavy_nonlinear_fiber_point(x: float) -> np.ndarray:
    """
    Nondecreasing positive point with heavy_nonlinear_f(y) == x in floating point.

    The common value alpha is the largest float with f(alpha * 1) <= x; the
    last component is then raised by bisection until f reaches x. The block
    products stay within a few ulps of each other.

    Args:
        x: Positive index value

    Returns:
        Array of shape (100,), heavy_nonlinear_gamma(x) when x cannot be hit
    """
    x = float(x)
    alpha = (x / 4.0) ** 0.2

    def f_flat(a: float) -> float:
        return heavy_nonlinear_f(np.full(HEAVY_DIM, a))

    for _ in range(_ULP_STEPS):
        lower = math.nextafter(alpha, 0.0)
        if f_flat(alpha) <= x or lower <= 0.0:
            break
        alpha = lower
    for _ in range(_ULP_STEPS):
        upper = math.nextafter(alpha, math.inf)
        if f_flat(upper) > x:
            break
        alpha = upper

    y = np.full(HEAVY_DIM, alpha)
    if heavy_nonlinear_f(y) >= x:
        return y
    lo, hi = alpha, alpha * (1.0 + 1e-12)
    y[-1] = hi
    if heavy_nonlinear_f(y) < x:
        return heavy_nonlinear_gamma(x)
    while True:
        mid = lo + (hi - lo) / 2.0
        if not lo < mid < hi:
            break
        y[-1] = mid
        if heavy_nonlinear_f(y) < x:
            lo = mid
        else:
            hi = mid
    y[-1] = hi
    return y


# -- ten-dimensional noise on 100 variables ----------------------------------------

G_BASES = 1.0 + np.arange(1, DIM2_BLOCKS + 1, dtype=float) / 10.0


def _check_block(j: int):
    if not 1 <= j <= DIM2_BLOCKS:
        raise ValueError(f"block index must lie in [1, {DIM2_BLOCKS}], got {j}")


def heavy_dim2_g(j: int, z: float) -> float:
    """g_j(z) = z + (1 + j/10)^z - 1, strictly increasing in z."""
    _check_block(j)
    z = np.array([float(z)])
    with np.errstate(over="ignore"):
        return float((z + np.power(G_BASES[j - 1 : j], z) - 1.0)[0])


def heavy_dim2_g_all(z) -> np.ndarray:
    """(g_1(z_1), ..., g_10(z_10))."""
    z = np.asarray(z, dtype=float)
    with np.errstate(over="ignore"):
        return z + np.power(G_BASES, z) - 1.0


def heavy_dim2_f(y) -> np.ndarray:
    blocks = np.asarray(y, dtype=float).reshape(DIM2_BLOCKS, 10)
    return heavy_dim2_g_all(blocks[:, 9]) - blocks[:, :9].sum(axis=1)


def heavy_dim2_epsilon(z) -> float:
    z = np.asarray(z, dtype=float)
    if z.size != DIM2_BLOCKS:
        raise ValueError(f"expected {DIM2_BLOCKS} components, got {z.size}")
    with np.errstate(over="ignore", invalid="ignore"):
        value = (
            np.sin(5.0 * math.pi * (z[1] - z[0] ** 3)) / 5.0
            + np.sin(6.0 * math.pi * (z[3] - np.exp(-z[1] - z[2]) + 1.0)) / 7.0
            + np.sin(7.0 * math.pi * np.sqrt(z[4] ** 2 + z[5] ** 2 + z[6] ** 2)) / 11.0
            + np.sin(8.0 * math.pi * z[7] * z[8] * z[9]) / 13.0
        )
    return _finite_square(float(value))
