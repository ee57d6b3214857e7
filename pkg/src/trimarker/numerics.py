"""
Numerical kernels shared by every other module.

Adaptive quadrature and bounded scalar maximization wrap scipy; quantiles and
summary statistics wrap numpy. All functions are pure.
"""

import logging
import math
import warnings
from typing import Callable, Iterable, Optional

import numpy as np
from scipy import integrate, optimize

from .errors import OptimizationError, QuadratureError
from .models import Interval, SampleStats

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9
SUBDIVISION_LIMIT = 100_000
GRID_POINTS = 1001


def integrate_adaptive(
    f: Callable[[float], float],
    domain: Interval,
    tol: float = DEFAULT_TOLERANCE,
    breakpoints: Optional[Iterable[float]] = None,
) -> float:
    """
    Integrate ``f`` over ``domain`` with adaptive Gauss-Kronrod quadrature.

    Args:
        f: Scalar integrand, finite on the domain
        domain: Integration interval
        tol: Absolute error tolerance (relative tolerance is not used)
        breakpoints: Interior points where ``f`` has kinks or sharp features

    Returns:
        float: The integral estimate

    Raises:
        QuadratureError: If ``f`` returns NaN, or the error estimate exceeds
            ``tol`` once the subdivision budget is spent

    Examples:
        >>> integrate_adaptive(lambda x: x, Interval(lo=0, hi=1), 1e-10)
        0.5
    """
    if not tol > 0:
        raise ValueError("tol must be positive")

    def guarded(x: float) -> float:
        value = f(x)
        if math.isnan(value):
            raise QuadratureError(f"integrand returned NaN at x={x!r}", abscissa=x)
        return value

    points = None
    if breakpoints is not None:
        points = sorted({float(p) for p in breakpoints if domain.lo < p < domain.hi}) or None

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error_bound = integrate.quad(
            guarded,
            domain.lo,
            domain.hi,
            epsabs=tol,
            epsrel=0.0,
            limit=SUBDIVISION_LIMIT,
            points=points,
        )

    failed = [w for w in caught if issubclass(w.category, integrate.IntegrationWarning)]
    if failed and error_bound > tol:
        logger.error(
            "Quadrature on [%g, %g] stopped at %.3g with error bound %.3g", domain.lo, domain.hi, value, error_bound
        )
        raise QuadratureError(
            f"quadrature did not reach tolerance {tol:g}: estimate {value!r}, error bound {error_bound:.3g} "
            f"({failed[0].message})",
            estimate=value,
            error_bound=error_bound,
        )
    return float(value)


def maximize_scalar(
    g: Callable,
    domain: Interval,
    tol: float = 1e-8,
    grid_points: int = GRID_POINTS,
    vectorized: bool = False,
) -> tuple[float, float]:
    """
    Maximize ``g`` on ``domain``: grid scan, then bounded refinement of the best cell.

    The refinement is scipy's bounded minimizer (golden-section steps with
    parabolic acceleration) on the two grid cells around the best grid point.
    With ``vectorized=True`` the grid is evaluated by a single call ``g(xs)``.

    Returns:
        tuple: (argmax, max)

    Raises:
        OptimizationError: If ``g`` is NaN on the whole grid
    """
    xs = np.linspace(domain.lo, domain.hi, grid_points)
    if vectorized:
        values = np.asarray(g(xs), dtype=float)
    else:
        values = np.array([g(x) for x in xs], dtype=float)

    usable = ~np.isnan(values)
    if not usable.any():
        raise OptimizationError(f"objective is NaN on the whole grid over [{domain.lo}, {domain.hi}]")
    values = np.where(usable, values, -np.inf)
    best = int(np.argmax(values))
    if not np.isfinite(values[best]):
        return float(xs[best]), float(values[best])

    left = xs[max(best - 1, 0)]
    right = xs[min(best + 1, grid_points - 1)]

    def objective(x: float) -> float:
        value = float(g(np.array([x]))[0]) if vectorized else float(g(x))
        return math.inf if math.isnan(value) else -value

    result = optimize.minimize_scalar(objective, bounds=(left, right), method="bounded", options={"xatol": tol})
    x_star, g_star = float(result.x), -float(result.fun)
    if values[best] > g_star:
        x_star, g_star = float(xs[best]), float(values[best])
    return x_star, g_star


def sample_quantile(data, p: float) -> float:
    """
    Type-7 sample quantile (linear interpolation between order statistics).

    Examples:
        >>> sample_quantile([1, 2, 3, 4], 0.25)
        1.75
    """
    values = np.asarray(data, dtype=float)
    if values.size == 0:
        raise ValueError("cannot take a quantile of empty data")
    if not np.all(np.isfinite(values)):
        raise ValueError("data must be finite")
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return float(np.quantile(values, p, method="linear"))


def summarize(data) -> SampleStats:
    """Sample size, mean, both standard deviations, IQR and range of ``data``."""
    values = np.asarray(data, dtype=float)
    if values.size < 2:
        raise ValueError(f"need at least 2 values to summarize, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise ValueError("data must be finite")
    lower, upper = np.quantile(values, [0.25, 0.75], method="linear")
    lo, hi = float(values.min()), float(values.max())
    mean = min(max(float(values.mean()), lo), hi)
    return SampleStats(
        n=values.size,
        mean=mean,
        sd_mle=float(values.std(ddof=0)),
        sd_sample=float(values.std(ddof=1)),
        iqr=max(float(upper - lower), 0.0),
        min=lo,
        max=hi,
    )
