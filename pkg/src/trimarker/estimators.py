"""
OVL and VUS estimators for three-class samples.

Four families of estimators are provided: trinormal plug-in (``NORMAL``), the
same after a common Box-Cox transformation (``BOXCOX_NORMAL``), Gaussian kernel
smoothing (``KERNEL``) and, for VUS only, the empirical U-statistic
(``EMPIRICAL``).
"""

import logging
import math
from typing import Iterable, Optional

import numpy as np
from scipy import special

from .errors import DataError, DegenerateFitError, UnsupportedEstimatorError
from .models import (
    BoxCoxFit,
    EstimateResult,
    Interval,
    KernelClass,
    KernelEstimator,
    Measure,
    Method,
    NormalTriple,
    Statistic,
    ThreeClassSample,
)
from .numerics import integrate_adaptive, maximize_scalar, summarize

logger = logging.getLogger(__name__)

NORMAL_TOLERANCE = 1e-8
KERNEL_TOLERANCE = 1e-7
NORMAL_HALF_WIDTH = 9.0
KERNEL_MARGIN = 6.0
SQRT_2PI = math.sqrt(2.0 * math.pi)

BOXCOX_DOMAIN = Interval(lo=-5.0, hi=5.0)
BOXCOX_TOLERANCE = 1e-6
LOG_BRANCH = 1e-10

SILVERMAN_CONSTANT = (4.0 / 3.0) ** 0.2
IQR_TO_SD = 1.349

CLAMP_SLACK = 1e-12


def _clamp(value: float, label: str) -> float:
    if value < 0.0 or value > 1.0:
        level = logging.WARNING if (value < -CLAMP_SLACK or value > 1.0 + CLAMP_SLACK) else logging.DEBUG
        logger.log(level, "%s estimate %.17g clamped to [0, 1]", label, value)
        return min(max(value, 0.0), 1.0)
    return value


# ============================================================================
# Trinormal
# ============================================================================


def fit_normal_triple(sample: ThreeClassSample) -> NormalTriple:
    """Per-class mean and maximum-likelihood standard deviation (divisor n)."""
    mus, sigmas = [], []
    for index, values in enumerate(sample.classes, start=1):
        if values.size < 2:
            raise DegenerateFitError(f"class {index} needs at least 2 values for a normal fit")
        sigma = float(values.std(ddof=0))
        if not sigma > 0:
            raise DegenerateFitError(f"class {index} has zero variance; the normal fit is degenerate")
        mus.append(float(values.mean()))
        sigmas.append(sigma)
    return NormalTriple(mu=tuple(mus), sigma=tuple(sigmas))


def vus_normal(fit: NormalTriple, tol: float = NORMAL_TOLERANCE) -> float:
    """Trinormal VUS: integral of Phi(a s - b) Phi(d - c s) phi(s) over s in [-9, 9]."""
    a, b, c, d = fit.a, fit.b, fit.c, fit.d

    def integrand(s: float) -> float:
        return special.ndtr(a * s - b) * special.ndtr(d - c * s) * math.exp(-0.5 * s * s) / SQRT_2PI

    value = integrate_adaptive(integrand, Interval(lo=-NORMAL_HALF_WIDTH, hi=NORMAL_HALF_WIDTH), tol)
    return _clamp(value, "VUS_N")


def normal_crossings(mu1: float, sigma1: float, mu2: float, sigma2: float) -> list[float]:
    """Points where two normal densities are equal."""
    quadratic = 0.5 / sigma1**2 - 0.5 / sigma2**2
    linear = mu2 / sigma2**2 - mu1 / sigma1**2
    constant = 0.5 * mu1**2 / sigma1**2 - 0.5 * mu2**2 / sigma2**2 + math.log(sigma1 / sigma2)
    if sigma1 == sigma2:
        return [] if linear == 0 else [-constant / linear]
    roots = np.roots([quadratic, linear, constant])
    return sorted(float(root.real) for root in roots if abs(root.imag) < 1e-12)


def ovl_normal(fit: NormalTriple, tol: float = NORMAL_TOLERANCE) -> float:
    """
    Overlap of the three fitted normal densities.

    Integrates in coordinates standardized by class 2, which leaves the value
    unchanged and makes it depend on the data only through (a, b, c, d).
    """
    center, unit = fit.mu[1], fit.sigma[1]
    params = [((m - center) / unit, s / unit) for m, s in zip(fit.mu, fit.sigma)]
    widest = max(s for _, s in params)
    domain = Interval(
        lo=min(m for m, _ in params) - NORMAL_HALF_WIDTH * widest,
        hi=max(m for m, _ in params) + NORMAL_HALF_WIDTH * widest,
    )
    crossings = [
        x
        for i in range(3)
        for j in range(i + 1, 3)
        if params[i] != params[j]
        for x in normal_crossings(*params[i], *params[j])
    ]

    def integrand(x: float) -> float:
        return min(math.exp(-0.5 * ((x - m) / s) ** 2) / (s * SQRT_2PI) for m, s in params)

    value = integrate_adaptive(integrand, domain, tol, crossings)
    return _clamp(value, "OVL_N")


# ============================================================================
# Box-Cox
# ============================================================================


def box_cox_transform(values, lam):
    """(x^lam - 1) / lam, or log(x) when |lam| < 1e-10; broadcasts over lam."""
    lam = np.where(np.abs(lam) < LOG_BRANCH, 0.0, lam)
    return special.boxcox(values, lam)


def box_cox_loglik(lam, sample: ThreeClassSample, shift: float = 0.0):
    """
    Three-group profile log-likelihood of the Box-Cox parameter, constant dropped.

    ``lam`` may be a scalar or an array; the result has the same shape.
    """
    lams = np.atleast_1d(np.asarray(lam, dtype=float))
    total = np.zeros(lams.shape)
    log_sum = 0.0
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for values in sample.classes:
            shifted = values + shift
            transformed = box_cox_transform(shifted[None, :], lams[:, None])
            spread = transformed.var(axis=1)
            spread = np.where(spread > 0, spread, np.nan)
            total -= 0.5 * shifted.size * np.log(spread)
            log_sum += float(np.log(shifted).sum())
        total += (lams - 1.0) * log_sum
    return total if np.ndim(lam) else float(total[0])


def fit_box_cox(
    sample: ThreeClassSample,
    domain: Interval = BOXCOX_DOMAIN,
    tol: float = BOXCOX_TOLERANCE,
    warn: bool = True,
) -> BoxCoxFit:
    """
    Maximum profile-likelihood Box-Cox parameter common to the three classes.

    When the smallest value m is not positive every value is first shifted by
    1 - m; the shift is recorded in the fit. ``warn=False`` logs these events
    at DEBUG, for use inside resampling loops.
    """
    for index, values in enumerate(sample.classes, start=1):
        if np.ptp(values) == 0:
            raise DegenerateFitError(f"class {index} is constant; the Box-Cox fit is degenerate")

    level = logging.WARNING if warn else logging.DEBUG
    smallest = float(sample.pooled().min())
    shift = 0.0
    if smallest <= 0:
        shift = 1.0 - smallest
        logger.log(level, "Box-Cox needs positive data; shifting all values by %.6g", shift)

    lam, loglik = maximize_scalar(lambda l: box_cox_loglik(l, sample, shift), domain, tol, vectorized=True)
    if not math.isfinite(loglik):
        raise DegenerateFitError("Box-Cox profile likelihood is not finite anywhere on the search domain")
    at_boundary = lam - domain.lo <= 10 * tol or domain.hi - lam <= 10 * tol
    if at_boundary:
        logger.log(level, "Box-Cox lambda %.6g is at the edge of the search domain [%g, %g]", lam, domain.lo, domain.hi)
    return BoxCoxFit(lam=lam, shift=shift, loglik=loglik, search_domain=domain, at_boundary=at_boundary)


def apply_box_cox(fit: BoxCoxFit, sample: ThreeClassSample) -> ThreeClassSample:
    """Transform every class with the fitted parameter and shift."""
    shifted = [values + fit.shift for values in sample.classes]
    for index, values in enumerate(shifted, start=1):
        if values.min() <= 0:
            raise DataError(f"class {index} has a non-positive value after the Box-Cox shift")
    return ThreeClassSample.from_arrays(*(box_cox_transform(values, fit.lam) for values in shifted))


def invert_box_cox(fit: BoxCoxFit, values):
    """Map transformed values back to the original scale."""
    lam = 0.0 if abs(fit.lam) < LOG_BRANCH else fit.lam
    return special.inv_boxcox(np.asarray(values, dtype=float), lam) - fit.shift


# ============================================================================
# Kernel
# ============================================================================


def silverman_bandwidth(values) -> float:
    """
    Silverman's rule (4/3)^(1/5) n^(-1/5) min(s, IQR/1.349).

    If one of s and IQR is zero the other is used alone.
    """
    stats = summarize(values)
    spreads = [spread for spread in (stats.sd_sample, stats.iqr / IQR_TO_SD) if spread > 0]
    if not spreads:
        raise DegenerateFitError("class is constant; the kernel bandwidth would be zero")
    return SILVERMAN_CONSTANT * stats.n ** (-0.2) * min(spreads)


def kernel_fit(
    sample: ThreeClassSample, bandwidths: Optional[tuple[float, float, float]] = None
) -> KernelEstimator:
    """Gaussian kernel smoothers with Silverman bandwidths unless given."""
    if bandwidths is None:
        bandwidths = tuple(silverman_bandwidth(values) for values in sample.classes)
    return KernelEstimator(
        classes=tuple(KernelClass(data=values, bandwidth=h) for values, h in zip(sample.classes, bandwidths))
    )


def _kernel_breakpoints(fit: KernelEstimator) -> list[float]:
    pooled = np.concatenate([kernel.data for kernel in fit.classes])
    return np.unique(np.quantile(pooled, np.linspace(0.0, 1.0, 11))).tolist()


def ovl_kernel(fit: KernelEstimator, tol: float = KERNEL_TOLERANCE) -> float:
    """Integral of the minimum of the three kernel densities."""
    first, second, third = fit.classes

    def integrand(x: float) -> float:
        return min(float(first.pdf(x)), float(second.pdf(x)), float(third.pdf(x)))

    value = integrate_adaptive(integrand, fit.support(KERNEL_MARGIN), tol, _kernel_breakpoints(fit))
    return _clamp(value, "OVL_K")


def vus_kernel(fit: KernelEstimator, tol: float = KERNEL_TOLERANCE) -> float:
    """Integral of F1 (1 - F3) f2 with kernel estimates of each piece."""
    first, second, third = fit.classes

    def integrand(u: float) -> float:
        return float(first.cdf(u)) * (1.0 - float(third.cdf(u))) * float(second.pdf(u))

    value = integrate_adaptive(integrand, fit.support(KERNEL_MARGIN), tol, _kernel_breakpoints(fit))
    return _clamp(value, "VUS_K")


# ============================================================================
# Empirical
# ============================================================================


def vus_empirical(sample: ThreeClassSample) -> float:
    """
    U-statistic estimate of P(X1 < X2 < X3).

    Each triple scores 1 if strictly ordered, 1/2 with one adjacent tie and 1/6
    when all three tie. Counts are exact integers (scaled by 6) obtained from
    sorted classes 1 and 3 for each class-2 value.
    """
    lower = np.sort(sample.class1)
    upper = np.sort(sample.class3)
    middle = sample.class2
    below = np.searchsorted(lower, middle, side="left").astype(np.int64)
    tied_low = np.searchsorted(lower, middle, side="right").astype(np.int64) - below
    at_most = np.searchsorted(upper, middle, side="right").astype(np.int64)
    tied_high = at_most - np.searchsorted(upper, middle, side="left").astype(np.int64)
    above = upper.size - at_most
    score = int(np.sum(6 * below * above + 3 * tied_low * above + 3 * below * tied_high + tied_low * tied_high))
    n1, n2, n3 = sample.sizes
    return score / (6 * n1 * n2 * n3)


# ============================================================================
# Dispatch
# ============================================================================


def require_supported(measure: Measure, method: Method) -> Statistic:
    """Return the statistic for a supported pair; an empirical OVL is not defined."""
    statistic = Statistic(measure=measure, method=method)
    if statistic.measure is Measure.OVL and statistic.method is Method.EMPIRICAL:
        raise UnsupportedEstimatorError("OVL has no empirical estimator; use NORMAL, BOXCOX_NORMAL or KERNEL")
    return statistic


def evaluate_statistics(
    sample: ThreeClassSample, statistics: Iterable[Statistic], warn: bool = True
) -> dict[Statistic, float]:
    """
    Values of several statistics on one sample.

    Fits are shared: one normal fit, one Box-Cox fit and one kernel fit at most.
    """
    fits = {}

    def fitted(method: Method):
        if method not in fits:
            if method is Method.NORMAL:
                fits[method] = fit_normal_triple(sample)
            elif method is Method.BOXCOX_NORMAL:
                transform = fit_box_cox(sample, warn=warn)
                fits[method] = fit_normal_triple(apply_box_cox(transform, sample))
            elif method is Method.KERNEL:
                fits[method] = kernel_fit(sample)
        return fits[method]

    values = {}
    for statistic in statistics:
        require_supported(statistic.measure, statistic.method)
        if statistic.method is Method.EMPIRICAL:
            value = vus_empirical(sample)
        elif statistic.method is Method.KERNEL:
            fit = fitted(Method.KERNEL)
            value = ovl_kernel(fit) if statistic.measure is Measure.OVL else vus_kernel(fit)
        else:
            fit = fitted(statistic.method)
            value = ovl_normal(fit) if statistic.measure is Measure.OVL else vus_normal(fit)
        values[statistic] = value
    return values


def estimate(sample: ThreeClassSample, measure: Measure, method: Method) -> EstimateResult:
    """Point estimate of ``measure`` by ``method``."""
    statistic = require_supported(measure, method)
    value = evaluate_statistics(sample, [statistic])[statistic]
    return EstimateResult(measure=statistic.measure, method=statistic.method, value=value)
