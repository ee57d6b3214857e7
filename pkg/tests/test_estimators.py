"""
Unit tests for the OVL and VUS estimators.
"""

import itertools
import math

import numpy as np
import pytest
from scipy import stats

from trimarker.distributions import parse_spec, theoretical_ovl, theoretical_vus
from trimarker.errors import DegenerateFitError, UnsupportedEstimatorError
from trimarker.estimators import (
    apply_box_cox,
    box_cox_loglik,
    estimate,
    evaluate_statistics,
    fit_box_cox,
    fit_normal_triple,
    invert_box_cox,
    kernel_fit,
    normal_crossings,
    ovl_kernel,
    ovl_normal,
    require_supported,
    silverman_bandwidth,
    vus_empirical,
    vus_kernel,
    vus_normal,
)
from trimarker.models import Interval, Measure, Method, NormalTriple, Statistic, ThreeClassSample
from trimarker.numerics import integrate_adaptive


def triple_loop_score(sample: ThreeClassSample) -> int:
    """Six times the summed ordering score, by brute force."""
    total = 0
    for x1, x2, x3 in itertools.product(*sample.classes):
        if x1 < x2 < x3:
            total += 6
        elif (x1 == x2 < x3) or (x1 < x2 == x3):
            total += 3
        elif x1 == x2 == x3:
            total += 1
    return total


# ============================================================================
# Empirical
# ============================================================================


@pytest.mark.parametrize("seed", range(200))
def test_empirical_matches_triple_loop(seed):
    """Integer-valued data with many ties."""
    rng = np.random.default_rng(seed)
    sizes = rng.integers(2, 9, size=3)
    sample = ThreeClassSample.from_arrays(*(rng.integers(0, 5, size=n).astype(float) for n in sizes))
    n1, n2, n3 = sample.sizes
    assert vus_empirical(sample) == triple_loop_score(sample) / (6 * n1 * n2 * n3)


def test_empirical_extremes():
    ordered = ThreeClassSample.from_arrays([1.0, 2.0], [3.0, 4.0], [5.0, 6.0])
    assert vus_empirical(ordered) == 1.0
    reversed_order = ThreeClassSample.from_arrays([5.0, 6.0], [3.0, 4.0], [1.0, 2.0])
    assert vus_empirical(reversed_order) == 0.0
    tied = ThreeClassSample.from_arrays([1.0, 1.0], [1.0, 1.0], [1.0, 1.0])
    assert vus_empirical(tied) == pytest.approx(1.0 / 6.0)


@pytest.mark.parametrize("seed", range(5))
def test_empirical_orderings_sum_to_one(seed):
    """Every triple of distinct values falls in exactly one of the six class orderings."""
    rng = np.random.default_rng(seed)
    classes = [rng.normal(size=n) for n in rng.integers(3, 15, size=3)]
    total = sum(
        vus_empirical(ThreeClassSample.from_arrays(*(classes[i] for i in order)))
        for order in itertools.permutations(range(3))
    )
    assert total == pytest.approx(1.0, abs=1e-12)


def test_empirical_rank_invariance(location_sample):
    """A strictly increasing transform leaves the empirical VUS unchanged."""
    transformed = location_sample.map(lambda values: np.exp(values) ** 3 + 7.0)
    assert vus_empirical(transformed) == vus_empirical(location_sample)


# ============================================================================
# Trinormal
# ============================================================================


def test_normal_fit_uses_divisor_n():
    sample = ThreeClassSample.from_arrays([0.0, 2.0], [1.0, 3.0, 5.0], [4.0, 6.0])
    fit = fit_normal_triple(sample)
    assert fit.mu == (1.0, 3.0, 5.0)
    assert fit.sigma[0] == pytest.approx(1.0)
    assert fit.sigma[1] == pytest.approx(math.sqrt(8.0 / 3.0))


def test_normal_fit_degenerate():
    sample = ThreeClassSample.from_arrays([1.0, 1.0], [1.0, 3.0], [4.0, 6.0])
    with pytest.raises(DegenerateFitError):
        fit_normal_triple(sample)


def test_exact_normal_fit_gives_theoretical_values():
    fit = NormalTriple(mu=(0.0, 1.0, 3.0), sigma=(1.0, 1.5, 0.7))
    specs = [parse_spec(text) for text in ("normal(0,1)", "normal(1,1.5)", "normal(3,0.7)")]
    assert ovl_normal(fit) == pytest.approx(theoretical_ovl(*specs), abs=1e-5)
    assert vus_normal(fit) == pytest.approx(theoretical_vus(*specs), abs=1e-5)


def test_vus_normal_equal_classes():
    fit = NormalTriple(mu=(2.0, 2.0, 2.0), sigma=(3.0, 3.0, 3.0))
    assert vus_normal(fit) == pytest.approx(1.0 / 6.0, abs=1e-8)
    assert ovl_normal(fit) == pytest.approx(1.0, abs=1e-8)


def test_normal_crossings():
    assert normal_crossings(0.0, 1.0, 2.0, 1.0) == [pytest.approx(1.0)]
    assert normal_crossings(0.0, 1.0, 0.0, 1.0) == []
    roots = normal_crossings(0.0, 1.0, 0.0, 2.0)
    assert len(roots) == 2
    for root in roots:
        assert stats.norm.pdf(root, 0, 1) == pytest.approx(stats.norm.pdf(root, 0, 2))


def test_affine_invariance(location_sample):
    moved = location_sample.map(lambda values: 3.5 * values - 12.0)
    statistics = [
        Statistic(measure=Measure.OVL, method=Method.NORMAL),
        Statistic(measure=Measure.VUS, method=Method.NORMAL),
        Statistic(measure=Measure.VUS, method=Method.EMPIRICAL),
    ]
    before = evaluate_statistics(location_sample, statistics)
    after = evaluate_statistics(moved, statistics)
    for statistic in statistics:
        assert after[statistic] == pytest.approx(before[statistic], abs=1e-8)


# ============================================================================
# Box-Cox
# ============================================================================


def test_box_cox_recovers_log_transform():
    rng = np.random.default_rng(42)
    sample = ThreeClassSample.from_arrays(*(rng.lognormal(mu, 1.0, size=2000) for mu in (0.0, 0.5, 1.0)))
    fit = fit_box_cox(sample)
    assert abs(fit.lam) < 0.15
    assert fit.shift == 0.0
    assert not fit.at_boundary


def test_box_cox_near_identity_for_normal_data():
    rng = np.random.default_rng(17)
    sample = ThreeClassSample.from_arrays(*(rng.normal(loc, 1.0, size=2000) for loc in (5.0, 5.5, 6.0)))
    fit = fit_box_cox(sample)
    assert abs(fit.lam - 1.0) <= 0.25
    assert fit.shift == 0.0


def test_box_cox_fit_maximizes_loglik():
    rng = np.random.default_rng(8)
    sample = ThreeClassSample.from_arrays(*(rng.gamma(shape, 1.0, size=60) for shape in (2.0, 3.0, 5.0)))
    fit = fit_box_cox(sample)
    grid = np.linspace(-5.0, 5.0, 2001)
    assert fit.loglik >= np.nanmax(box_cox_loglik(grid, sample)) - 1e-8
    assert box_cox_loglik(fit.lam, sample) == pytest.approx(fit.loglik)


def test_box_cox_shifts_non_positive_data():
    rng = np.random.default_rng(9)
    sample = ThreeClassSample.from_arrays(rng.normal(0, 1, 40), rng.normal(1, 1, 40), rng.normal(2, 1, 40))
    fit = fit_box_cox(sample)
    assert fit.shift == pytest.approx(1.0 - sample.pooled().min())
    transformed = apply_box_cox(fit, sample)
    np.testing.assert_allclose(invert_box_cox(fit, transformed.class2), sample.class2, rtol=1e-9, atol=1e-9)


def test_box_cox_custom_domain():
    rng = np.random.default_rng(10)
    sample = ThreeClassSample.from_arrays(*(rng.lognormal(mu, 0.5, size=50) for mu in (0.0, 0.3, 0.6)))
    fit = fit_box_cox(sample, domain=Interval(lo=1.0, hi=2.0))
    assert fit.at_boundary
    assert fit.lam == pytest.approx(1.0, abs=1e-4)


def test_box_cox_constant_class():
    sample = ThreeClassSample.from_arrays([2.0, 2.0, 2.0], [1.0, 3.0], [4.0, 6.0])
    with pytest.raises(DegenerateFitError):
        fit_box_cox(sample)


# ============================================================================
# Kernel
# ============================================================================


def test_kernel_density_integrates_to_one(location_sample):
    fit = kernel_fit(location_sample)
    for kernel in fit.classes:
        breakpoints = np.quantile(kernel.data, np.linspace(0.0, 1.0, 11))
        total = integrate_adaptive(lambda x: float(kernel.pdf(x)), fit.support(10.0), 1e-8, breakpoints)
        assert total == pytest.approx(1.0, abs=1e-6)


def test_silverman_bandwidth():
    values = np.arange(1.0, 21.0)
    expected_spread = min(values.std(ddof=1), stats.iqr(values) / 1.349)
    assert silverman_bandwidth(values) == pytest.approx((4.0 / 3.0) ** 0.2 * 20 ** (-0.2) * expected_spread)


def test_silverman_falls_back_when_iqr_is_zero():
    values = np.array([0.0] * 10 + [5.0])
    assert silverman_bandwidth(values) == pytest.approx((4.0 / 3.0) ** 0.2 * 11 ** (-0.2) * values.std(ddof=1))


def test_silverman_constant_values():
    with pytest.raises(DegenerateFitError):
        silverman_bandwidth([3.0, 3.0, 3.0])


def test_kernel_estimates_near_truth():
    rng = np.random.default_rng(12)
    sample = ThreeClassSample.from_arrays(*(rng.normal(mu, 1.0, size=3000) for mu in (0.0, 0.5, 1.0)))
    fit = kernel_fit(sample)
    assert ovl_kernel(fit) == pytest.approx(0.6171, abs=0.04)
    assert vus_kernel(fit) == pytest.approx(0.3372, abs=0.03)


def test_kernel_vus_identical_classes():
    values = np.random.default_rng(23).normal(size=100)
    fit = kernel_fit(ThreeClassSample.from_arrays(values, values, values))
    assert vus_kernel(fit) == pytest.approx(1.0 / 6.0, abs=0.02)


def test_kernel_separated_classes(separated_sample):
    fit = kernel_fit(separated_sample)
    assert ovl_kernel(fit) < 1e-6
    assert vus_kernel(fit) == pytest.approx(1.0, abs=1e-6)


# ============================================================================
# Dispatch
# ============================================================================


def test_empirical_ovl_is_unsupported(location_sample):
    with pytest.raises(UnsupportedEstimatorError):
        require_supported(Measure.OVL, Method.EMPIRICAL)
    with pytest.raises(UnsupportedEstimatorError):
        estimate(location_sample, Measure.OVL, Method.EMPIRICAL)


def test_estimate_result(location_sample):
    result = estimate(location_sample, Measure.VUS, Method.EMPIRICAL)
    assert result.label == "VUS_E"
    assert result.ci is None
    assert result.value == vus_empirical(location_sample)


def test_evaluate_statistics_all_pairs(location_sample):
    shifted = location_sample.map(lambda values: values + 10.0)
    statistics = [Statistic.from_label(label) for label in ("OVL_N", "VUS_N", "OVL_N^BC", "OVL_K", "VUS_K", "VUS_E")]
    values = evaluate_statistics(shifted, statistics)
    assert list(values) == statistics
    assert all(0.0 <= value <= 1.0 for value in values.values())
    assert values[statistics[0]] == pytest.approx(ovl_normal(fit_normal_triple(shifted)))
