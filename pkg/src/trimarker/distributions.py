"""
Class distributions: evaluation, sampling, theoretical OVL and VUS, and the
three-class decision rule.

Single families are backed by frozen ``scipy.stats`` distributions; mixtures are
combined here. Specs also have a canonical text form such as ``normal(0,1)`` or
``mix(0.5*normal(0,1)+0.5*gamma(4,1))``.
"""

import logging
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from pydantic import TypeAdapter, ValidationError
from scipy import optimize, stats

from .errors import SpecParseError
from .models import (
    DecisionRule,
    DistributionSpec,
    GammaSpec,
    Interval,
    LogNormalSpec,
    MixtureSpec,
    NormalSpec,
    OperatingPoint,
)
from .numerics import integrate_adaptive

logger = logging.getLogger(__name__)

ComponentSpec = Union[NormalSpec, LogNormalSpec, GammaSpec]

THEORETICAL_TOLERANCE = 1e-6
TAIL_PROBABILITY = 1e-10
BREAKPOINT_PROBABILITIES = (0.005, 0.05, 0.25, 0.5, 0.75, 0.95, 0.995)

_spec_adapter = TypeAdapter(DistributionSpec)


# ============================================================================
# Evaluation
# ============================================================================


@lru_cache(maxsize=512)
def _frozen(spec: ComponentSpec):
    if isinstance(spec, NormalSpec):
        return stats.norm(loc=spec.mu, scale=spec.sigma)
    if isinstance(spec, LogNormalSpec):
        return stats.lognorm(s=spec.sigma, scale=math.exp(spec.mu))
    return stats.gamma(a=spec.shape, scale=spec.scale)


def _parts(spec: DistributionSpec) -> list[tuple[float, ComponentSpec]]:
    if isinstance(spec, MixtureSpec):
        return list(zip(spec.weights, spec.components))
    return [(1.0, spec)]


def pdf(spec: DistributionSpec, x):
    """Density at x; zero outside the support."""
    total = sum(weight * _frozen(component).pdf(x) for weight, component in _parts(spec))
    return float(total) if np.ndim(total) == 0 else total


def cdf(spec: DistributionSpec, x):
    """Right-continuous distribution function at x."""
    total = sum(weight * _frozen(component).cdf(x) for weight, component in _parts(spec))
    return float(total) if np.ndim(total) == 0 else total


def quantile(spec: DistributionSpec, p: float) -> float:
    """
    Value x with cdf(spec, x) = p.

    Single families use their exact inverse. A mixture's quantile lies between
    the smallest and largest component quantiles at p, which brackets a Brent
    root search on the mixture CDF.
    """
    if not 0 < p < 1:
        raise ValueError(f"quantile needs 0 < p < 1, got {p}")
    if not isinstance(spec, MixtureSpec):
        return float(_frozen(spec).ppf(p))

    candidates = [float(_frozen(component).ppf(p)) for component in spec.components]
    lo, hi = min(candidates), max(candidates)
    if lo == hi:
        return lo
    span = hi - lo
    while cdf(spec, lo) > p:
        lo -= span
        span *= 2
    span = hi - lo
    while cdf(spec, hi) < p:
        hi += span
        span *= 2
    return float(optimize.brentq(lambda x: cdf(spec, x) - p, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps))


def mean(spec: DistributionSpec) -> float:
    return float(sum(weight * _frozen(component).mean() for weight, component in _parts(spec)))


def variance(spec: DistributionSpec) -> float:
    """Variance, including the between-component spread of mixtures."""
    center = mean(spec)
    second = sum(
        weight * (_frozen(component).var() + _frozen(component).mean() ** 2) for weight, component in _parts(spec)
    )
    return float(second - center**2)


def support_lower(spec: DistributionSpec) -> float:
    """Lower end of the support: 0 for log-normal and gamma, -inf otherwise."""
    return min(-math.inf if isinstance(component, NormalSpec) else 0.0 for _, component in _parts(spec))


def sample(spec: DistributionSpec, n: int, stream: np.random.Generator) -> np.ndarray:
    """
    Draw ``n`` i.i.d. values.

    Mixtures draw one uniform per observation to pick the component, then the
    component values in component order.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if isinstance(spec, NormalSpec):
        return stream.normal(spec.mu, spec.sigma, n)
    if isinstance(spec, LogNormalSpec):
        return stream.lognormal(spec.mu, spec.sigma, n)
    if isinstance(spec, GammaSpec):
        return stream.gamma(spec.shape, spec.scale, n)

    picks = np.searchsorted(np.cumsum(spec.weights), stream.random(n), side="right")
    picks = np.minimum(picks, len(spec.components) - 1)
    values = np.empty(n)
    for index, component in enumerate(spec.components):
        chosen = picks == index
        count = int(chosen.sum())
        if count:
            values[chosen] = sample(component, count, stream)
    return values


# ============================================================================
# Theoretical accuracy measures
# ============================================================================


def effective_domain(*specs: DistributionSpec) -> tuple[Interval, list[float]]:
    """
    Integration range covering every class, plus interior breakpoints.

    Each class contributes its support minimum when finite (else its 1e-10
    quantile) and its 1 - 1e-10 quantile, and breakpoints at a ladder of its
    quantiles so the quadrature sees every class's bulk.
    """
    lows, highs, breakpoints = [], [], []
    for spec in specs:
        lower = support_lower(spec)
        lows.append(lower if math.isfinite(lower) else quantile(spec, TAIL_PROBABILITY))
        highs.append(quantile(spec, 1 - TAIL_PROBABILITY))
        breakpoints.extend(quantile(spec, p) for p in BREAKPOINT_PROBABILITIES)
        if any(not isinstance(component, NormalSpec) for _, component in _parts(spec)):
            breakpoints.append(0.0)
    return Interval(lo=min(lows), hi=max(highs)), breakpoints


def _density(spec: DistributionSpec) -> Callable[[float], float]:
    parts = [(weight, _frozen(component)) for weight, component in _parts(spec)]
    return lambda x: sum(weight * dist.pdf(x) for weight, dist in parts)


def _distribution(spec: DistributionSpec) -> Callable[[float], float]:
    parts = [(weight, _frozen(component)) for weight, component in _parts(spec)]
    return lambda x: sum(weight * dist.cdf(x) for weight, dist in parts)


def theoretical_ovl(
    f1: DistributionSpec, f2: DistributionSpec, f3: DistributionSpec, tol: float = THEORETICAL_TOLERANCE
) -> float:
    """Overlap coefficient: integral of the pointwise minimum of the three densities."""
    densities = [_density(spec) for spec in (f1, f2, f3)]
    domain, breakpoints = effective_domain(f1, f2, f3)
    value = integrate_adaptive(lambda x: min(density(x) for density in densities), domain, tol, breakpoints)
    return min(max(value, 0.0), 1.0)


def theoretical_vus(
    f1: DistributionSpec, f2: DistributionSpec, f3: DistributionSpec, tol: float = THEORETICAL_TOLERANCE
) -> float:
    """Volume under the ROC surface as the single integral of F1 (1 - F3) f2."""
    F1, F3, density2 = _distribution(f1), _distribution(f3), _density(f2)
    domain, breakpoints = effective_domain(f1, f2, f3)
    value = integrate_adaptive(lambda u: F1(u) * (1.0 - F3(u)) * density2(u), domain, tol, breakpoints)
    return min(max(value, 0.0), 1.0)


def theoretical_vus_double(
    f1: DistributionSpec, f2: DistributionSpec, f3: DistributionSpec, tol: float = 1e-7
) -> float:
    """
    VUS as the double integral over threshold pairs c1 < c2.

    Substituting c1 = F1^-1(p1) and c2 = F3^-1(1 - p3) in the ROC-surface double
    integral gives the integral of (F2(c2) - F2(c1)) f1(c1) f3(c2) over c1 < c2,
    evaluated here by nested quadrature.
    """
    density1, density3 = _density(f1), _density(f3)
    F2 = _distribution(f2)
    domain, breakpoints = effective_domain(f1, f2, f3)
    inner_tol = tol / (10 * domain.width)

    def inner(c1: float) -> float:
        weight = density1(c1)
        if weight == 0.0 or c1 >= domain.hi:
            return 0.0
        base = F2(c1)
        upper = Interval(lo=c1, hi=domain.hi)
        return weight * integrate_adaptive(lambda c2: (F2(c2) - base) * density3(c2), upper, inner_tol, breakpoints)

    return min(max(integrate_adaptive(inner, domain, tol, breakpoints), 0.0), 1.0)


def roc_surface(p1: float, p3: float, f1: DistributionSpec, f2: DistributionSpec, f3: DistributionSpec) -> float:
    """
    Class-2 true positive fraction reachable when classes 1 and 3 have
    true positive fractions p1 and p3; zero when the thresholds cross.
    """
    if not (0 <= p1 <= 1 and 0 <= p3 <= 1):
        raise ValueError("p1 and p3 must lie in [0, 1]")
    domain, _ = effective_domain(f1, f2, f3)
    c1 = domain.lo if p1 == 0 else domain.hi if p1 == 1 else quantile(f1, p1)
    c2 = domain.hi if p3 == 0 else domain.lo if p3 == 1 else quantile(f3, 1 - p3)
    if c1 > c2:
        return 0.0
    return max(cdf(f2, c2) - cdf(f2, c1), 0.0)


# ============================================================================
# Decision rule
# ============================================================================


def operating_point(
    rule: DecisionRule, f1: DistributionSpec, f2: DistributionSpec, f3: DistributionSpec
) -> OperatingPoint:
    """True positive fractions of the three classes under ``rule``."""
    return OperatingPoint(
        tpf1=min(max(cdf(f1, rule.c1), 0.0), 1.0),
        tpf2=min(max(cdf(f2, rule.c2) - cdf(f2, rule.c1), 0.0), 1.0),
        tpf3=min(max(1.0 - cdf(f3, rule.c2), 0.0), 1.0),
    )


def classify(rule: DecisionRule, x: float) -> int:
    """Class 1 for x <= c1, class 2 for c1 < x <= c2, class 3 above c2."""
    if x <= rule.c1:
        return 1
    if x <= rule.c2:
        return 2
    return 3


# ============================================================================
# Text form
# ============================================================================

_FAMILY_FIELDS = {
    "normal": ("mu", "sigma"),
    "lognormal": ("mu", "sigma"),
    "gamma": ("shape", "scale"),
}
_CALL = re.compile(r"^([a-z]+)\((.*)\)$")


def _parse_number(text: str) -> float:
    try:
        if "/" in text:
            return float(Fraction(text))
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecParseError(f"'{text}' is not a number") from exc


def _parse_component(text: str) -> dict:
    match = _CALL.match(text)
    if not match or match.group(1) not in _FAMILY_FIELDS:
        raise SpecParseError(f"cannot parse distribution '{text}' (expected normal(..), lognormal(..) or gamma(..))")
    family, arguments = match.groups()
    values = [_parse_number(item) for item in arguments.split(",") if item]
    names = _FAMILY_FIELDS[family]
    if len(values) != len(names):
        raise SpecParseError(f"{family} takes {len(names)} parameters, got {len(values)} in '{text}'")
    return {"family": family, **dict(zip(names, values))}


def _mixture_terms(body: str) -> list[str]:
    """Split a mixture body on the "+" signs between terms, not those of exponents like 1e+2."""
    terms, depth, start = [], 0, 0
    for index, char in enumerate(body):
        if char == "(":
            depth += 1
        elif char == ")":
            depth -= 1
        elif char == "+" and depth == 0 and body[index - 1 : index] != "e":
            terms.append(body[start:index])
            start = index + 1
    terms.append(body[start:])
    return terms


def parse_spec(text: str) -> DistributionSpec:
    """
    Parse the canonical text form of a distribution.

    Examples:
        >>> parse_spec("gamma(2, 1)")
        GammaSpec(family='gamma', shape=2.0, scale=1.0)
        >>> parse_spec("mix(0.5*normal(0,1)+0.5*normal(3,1))").weights
        (0.5, 0.5)
    """
    compact = re.sub(r"\s+", "", text).lower()
    if compact.startswith("mix(") and compact.endswith(")"):
        weights, components = [], []
        for term in _mixture_terms(compact[4:-1]):
            weight, star, component = term.partition("*")
            if not star:
                raise SpecParseError(f"mixture term '{term}' must look like <weight>*<distribution>")
            weights.append(_parse_number(weight))
            components.append(_parse_component(component))
        data = {"family": "mixture", "weights": weights, "components": components}
    else:
        data = _parse_component(compact)
    try:
        return _spec_adapter.validate_python(data)
    except ValidationError as exc:
        raise SpecParseError(f"invalid distribution '{text}': {exc.errors()[0]['msg']}") from exc


def format_spec(spec: DistributionSpec) -> str:
    """Canonical text form; ``parse_spec(format_spec(s)) == s``."""
    if isinstance(spec, MixtureSpec):
        terms = "+".join(f"{weight!r}*{format_spec(component)}" for weight, component in _parts(spec))
        return f"mix({terms})"
    names = _FAMILY_FIELDS[spec.family]
    return f"{spec.family}({','.join(repr(float(getattr(spec, name))) for name in names)})"
