"""
Unit tests for the numerical kernels.
"""

import math

import numpy as np
import pytest
from scipy import stats

from trimarker.errors import OptimizationError, QuadratureError
from trimarker.models import Interval
from trimarker.numerics import integrate_adaptive, maximize_scalar, sample_quantile, summarize


def test_integrate_polynomial():
    """A linear integrand is integrated exactly."""
    assert integrate_adaptive(lambda x: x, Interval(lo=0, hi=1), 1e-10) == pytest.approx(0.5, abs=1e-12)


def test_integrate_normal_density():
    value = integrate_adaptive(stats.norm.pdf, Interval(lo=-12, hi=12), 1e-10)
    assert value == pytest.approx(1.0, abs=1e-9)


def test_integrate_kink_with_breakpoints():
    """Breakpoints outside the domain are ignored."""
    value = integrate_adaptive(abs, Interval(lo=-1, hi=1), 1e-10, breakpoints=[0.0, 5.0, -3.0])
    assert value == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_integrate_random_polynomials(seed):
    """Polynomials up to degree 6 are integrated exactly, and integration is linear."""
    rng = np.random.default_rng(seed)
    lo = rng.uniform(-2, 1)
    domain = Interval(lo=lo, hi=lo + rng.uniform(0.5, 2))
    first = np.polynomial.Polynomial(rng.normal(size=rng.integers(1, 8)))
    second = np.polynomial.Polynomial(rng.normal(size=7))
    a, b = rng.uniform(-2, 2, size=2)
    tol = 1e-9

    def exact(poly):
        antiderivative = poly.integ()
        return antiderivative(domain.hi) - antiderivative(domain.lo)

    assert integrate_adaptive(first, domain, tol) == pytest.approx(exact(first), abs=1e-8)
    combined = integrate_adaptive(lambda x: a * first(x) + b * second(x), domain, tol)
    separate = a * integrate_adaptive(first, domain, tol) + b * integrate_adaptive(second, domain, tol)
    assert combined == pytest.approx(separate, abs=2 * tol)


def test_integrate_sine():
    assert integrate_adaptive(math.sin, Interval(lo=0, hi=math.pi), 1e-10) == pytest.approx(2.0, abs=1e-10)


def test_integrate_nan_reports_abscissa():
    with pytest.raises(QuadratureError) as excinfo:
        integrate_adaptive(lambda x: math.nan, Interval(lo=0, hi=1))
    assert excinfo.value.abscissa is not None
    assert 0.0 <= excinfo.value.abscissa <= 1.0


def test_integrate_rejects_non_positive_tolerance():
    with pytest.raises(ValueError):
        integrate_adaptive(lambda x: x, Interval(lo=0, hi=1), 0.0)


def test_maximize_interior():
    x_star, g_star = maximize_scalar(lambda x: -((x - 0.3) ** 2), Interval(lo=-1, hi=1))
    assert x_star == pytest.approx(0.3, abs=1e-6)
    assert g_star == pytest.approx(0.0, abs=1e-10)


def test_maximize_vectorized_matches_scalar():
    g = lambda x: np.sin(x) - 0.1 * x**2  # noqa: E731
    domain = Interval(lo=-3, hi=3)
    scalar = maximize_scalar(g, domain)
    vectorized = maximize_scalar(g, domain, vectorized=True)
    assert vectorized[0] == pytest.approx(scalar[0], abs=1e-6)
    assert vectorized[1] == pytest.approx(scalar[1], abs=1e-10)


def test_maximize_at_boundary():
    """An increasing objective is maximized at the right edge."""
    x_star, g_star = maximize_scalar(lambda x: x, Interval(lo=0, hi=2))
    assert x_star == pytest.approx(2.0, abs=1e-6)
    assert g_star == pytest.approx(2.0, abs=1e-6)


def test_maximize_ignores_partial_nan():
    g = lambda x: math.nan if x < 0 else -((x - 1) ** 2)  # noqa: E731
    x_star, _ = maximize_scalar(g, Interval(lo=-2, hi=2))
    assert x_star == pytest.approx(1.0, abs=1e-6)


def test_maximize_all_nan():
    with pytest.raises(OptimizationError):
        maximize_scalar(lambda x: math.nan, Interval(lo=0, hi=1))


def test_sample_quantile_type7():
    assert sample_quantile([1, 2, 3, 4], 0.25) == pytest.approx(1.75)
    assert sample_quantile([1, 2, 3, 4], 0.0) == 1.0
    assert sample_quantile([1, 2, 3, 4], 1.0) == 4.0
    data = np.random.default_rng(3).normal(size=37)
    assert sample_quantile(data, 0.05) == np.quantile(data, 0.05)


@pytest.mark.parametrize("data,p,expected", [([1, 2, 3], 0.5, 2.0), ([1, 2, 3, 4], 0.25, 1.75), ([5], 0.9, 5.0)])
def test_sample_quantile_examples(data, p, expected):
    assert sample_quantile(data, p) == pytest.approx(expected)


@pytest.mark.parametrize("seed", range(5))
def test_sample_quantile_monotone_and_affine(seed):
    rng = np.random.default_rng(seed)
    data = rng.normal(size=rng.integers(1, 60))
    levels = np.linspace(0, 1, 41)
    quantiles = [sample_quantile(data, p) for p in levels]
    assert np.all(np.diff(quantiles) >= -1e-12)
    scale, shift = rng.uniform(0.1, 10), rng.uniform(-5, 5)
    for p, q in zip(levels, quantiles):
        assert sample_quantile(scale * data + shift, p) == pytest.approx(scale * q + shift, rel=1e-12, abs=1e-12)


def test_sample_quantile_errors():
    with pytest.raises(ValueError):
        sample_quantile([], 0.5)
    with pytest.raises(ValueError):
        sample_quantile([1.0, 2.0], 1.5)
    with pytest.raises(ValueError):
        sample_quantile([1.0, math.inf], 0.5)


def test_summarize():
    summary = summarize([1.0, 2.0, 3.0, 4.0])
    assert summary.n == 4
    assert summary.mean == pytest.approx(2.5)
    assert summary.sd_mle == pytest.approx(math.sqrt(1.25))
    assert summary.sd_sample == pytest.approx(math.sqrt(5.0 / 3.0))
    assert summary.iqr == pytest.approx(1.5)
    assert (summary.min, summary.max) == (1.0, 4.0)


def test_summarize_examples():
    five = summarize([1, 2, 3, 4, 5])
    assert (five.mean, five.iqr) == (pytest.approx(3.0), pytest.approx(2.0))
    assert five.sd_sample == pytest.approx(1.5811, abs=1e-4)
    constant = summarize([2.5, 2.5, 2.5, 2.5])
    assert (constant.sd_mle, constant.iqr) == (0.0, 0.0)
    pair = summarize([0, 1])
    assert (pair.mean, pair.sd_mle) == (pytest.approx(0.5), pytest.approx(0.5))
    assert pair.sd_sample == pytest.approx(0.7071, abs=1e-4)


@pytest.mark.parametrize("seed", range(5))
def test_summarize_sd_identity(seed):
    data = np.random.default_rng(seed).gamma(2.0, 3.0, size=25)
    summary = summarize(data)
    assert summary.sd_mle**2 * summary.n == pytest.approx(summary.sd_sample**2 * (summary.n - 1), rel=1e-12)


def test_summarize_needs_two_values():
    with pytest.raises(ValueError):
        summarize([1.0])
