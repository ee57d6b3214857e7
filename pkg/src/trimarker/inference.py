"""
Bootstrap inference for OVL and VUS.

Percentile confidence intervals come from stratified resampling (within each
class). The informativeness test resamples all three classes from the pooled
data, which simulates the statistic under F1 = F2 = F3. Iteration b of either
procedure draws from its own substream of (seed, key, b), so results do not
depend on execution order.
"""

import logging
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import BootstrapError, DataError, NumericalError
from .estimators import evaluate_statistics, require_supported
from .models import (
    BootstrapConfig,
    ConfidenceInterval,
    Direction,
    EstimateResult,
    Measure,
    Method,
    Statistic,
    TestResult,
    ThreeClassSample,
)
from .numerics import sample_quantile
from .utils import substream

logger = logging.getLogger(__name__)

ATTEMPT_FACTOR = 10
CI_STREAM = 0
TEST_STREAM = 1

Resampler = Callable[[ThreeClassSample, np.random.Generator], ThreeClassSample]


class OvlBand(str, Enum):
    """Interpretation of an OVL value."""

    NONE = "No differentiation"
    POOR = "Poor"
    GOOD = "Good"
    VERY_GOOD = "Very good"
    EXCELLENT = "Excellent"


OVL_CUTOFFS = [
    (0.75, OvlBand.POOR),
    (0.55, OvlBand.GOOD),
    (0.35, OvlBand.VERY_GOOD),
    (0.0, OvlBand.EXCELLENT),
]


def interpret_ovl(value: float) -> OvlBand:
    """
    Differentiation band of an OVL value.

    Examples:
        >>> interpret_ovl(0.1483).value
        'Excellent'
        >>> interpret_ovl(0.60).value
        'Good'
    """
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"OVL must lie in [0, 1], got {value}")
    if value == 1.0:
        return OvlBand.NONE
    for cutoff, band in OVL_CUTOFFS:
        if value >= cutoff:
            return band
    return OvlBand.EXCELLENT


# ============================================================================
# Resampling
# ============================================================================


def stratified_resample(sample: ThreeClassSample, stream: np.random.Generator) -> ThreeClassSample:
    """Resample each class from itself, keeping class sizes."""
    return ThreeClassSample.from_arrays(
        *(stream.choice(values, size=values.size, replace=True) for values in sample.classes)
    )


def pooled_resample(sample: ThreeClassSample, stream: np.random.Generator) -> ThreeClassSample:
    """Draw all three classes from the pooled values, keeping class sizes."""
    pool = sample.pooled()
    return ThreeClassSample.from_arrays(*(stream.choice(pool, size=n, replace=True) for n in sample.sizes))


def bootstrap_distribution(
    sample: ThreeClassSample,
    evaluate: Callable[[ThreeClassSample], Sequence[float]],
    B: int,
    seed: int,
    resampler: Resampler,
    key: tuple[int, ...] = (),
) -> tuple[np.ndarray, int]:
    """
    B rows of statistic values, one row per resample.

    A resample on which ``evaluate`` raises a numerical or data error is redrawn
    from the same iteration's stream. At most 10 B attempts are made in total.

    Returns:
        tuple: (array of shape (B, k), number of redraws)

    Raises:
        BootstrapError: If the attempt budget is exhausted
    """
    rows = []
    attempts = redraws = 0
    budget = ATTEMPT_FACTOR * B
    for iteration in range(B):
        stream = substream(seed, *key, iteration)
        while True:
            attempts += 1
            if attempts > budget:
                raise BootstrapError(
                    f"gave up after {budget} resampling attempts ({redraws} redraws) for B={B}",
                    attempts=attempts - 1,
                    redraws=redraws,
                )
            try:
                rows.append([float(v) for v in evaluate(resampler(sample, stream))])
                break
            except (NumericalError, DataError) as exc:
                redraws += 1
                logger.debug("Resample %d redrawn: %s", iteration, exc)
    if redraws:
        logger.info("%d of %d bootstrap resamples were redrawn", redraws, B)
    return np.array(rows, dtype=float).reshape(B, -1), redraws


def _statistics_evaluator(statistics: list[Statistic]) -> Callable[[ThreeClassSample], list[float]]:
    def evaluate(resample: ThreeClassSample) -> list[float]:
        values = evaluate_statistics(resample, statistics, warn=False)
        return [values[statistic] for statistic in statistics]

    return evaluate


# ============================================================================
# Confidence intervals
# ============================================================================


def percentile_interval(replicates, level: float) -> tuple[float, float]:
    """Type-7 quantiles at (1 - level)/2 and 1 - (1 - level)/2."""
    tail = (1.0 - level) / 2.0
    return sample_quantile(replicates, tail), sample_quantile(replicates, 1.0 - tail)


def bootstrap_many(
    sample: ThreeClassSample,
    statistics: Iterable[Statistic],
    cfg: BootstrapConfig,
    key: tuple[int, ...] = (),
) -> list[EstimateResult]:
    """Point estimates with percentile CIs, all statistics sharing the same resamples."""
    statistics = [require_supported(s.measure, s.method) for s in statistics]
    point = evaluate_statistics(sample, statistics)
    replicates, redraws = bootstrap_distribution(
        sample, _statistics_evaluator(statistics), cfg.B, cfg.seed, stratified_resample, (*key, CI_STREAM)
    )
    results = []
    for column, statistic in enumerate(statistics):
        lo, hi = percentile_interval(replicates[:, column], cfg.level)
        results.append(
            EstimateResult(
                measure=statistic.measure,
                method=statistic.method,
                value=point[statistic],
                ci=ConfidenceInterval(lo=lo, hi=hi, level=cfg.level, B=cfg.B, redraws=redraws),
            )
        )
    return results


def bootstrap_ci(
    sample: ThreeClassSample,
    measure: Measure,
    method: Method,
    cfg: BootstrapConfig,
    key: tuple[int, ...] = (),
) -> EstimateResult:
    """Point estimate of one statistic with its percentile bootstrap CI."""
    return bootstrap_many(sample, [require_supported(measure, method)], cfg, key)[0]


# ============================================================================
# Pooled-null test
# ============================================================================


def rejects(observed: float, null_quantile: float, direction: Direction) -> bool:
    """True when ``observed`` lies beyond the null quantile in the informative direction."""
    if direction is Direction.LOWER_TAIL:
        return observed < null_quantile
    return observed > null_quantile


def null_tests(
    sample: ThreeClassSample,
    statistics: Iterable[Statistic],
    cfg: BootstrapConfig,
    key: tuple[int, ...] = (),
) -> dict[Statistic, TestResult]:
    """
    Pooled-null bootstrap tests of "the marker is not informative".

    OVL rejects below the alpha quantile of its null distribution, VUS above
    the 1 - alpha quantile. All statistics share the same null resamples.
    """
    statistics = [require_supported(s.measure, s.method) for s in statistics]
    observed = evaluate_statistics(sample, statistics)
    replicates, redraws = bootstrap_distribution(
        sample, _statistics_evaluator(statistics), cfg.B, cfg.seed, pooled_resample, (*key, TEST_STREAM)
    )
    results = {}
    for column, statistic in enumerate(statistics):
        if statistic.measure is Measure.OVL:
            direction = Direction.LOWER_TAIL
            quantile = sample_quantile(replicates[:, column], cfg.alpha)
        else:
            direction = Direction.UPPER_TAIL
            quantile = sample_quantile(replicates[:, column], 1.0 - cfg.alpha)
        results[statistic] = TestResult(
            measure=statistic.measure,
            method=statistic.method,
            statistic=observed[statistic],
            null_quantile=quantile,
            reject=rejects(observed[statistic], quantile, direction),
            direction=direction,
            B=cfg.B,
            alpha=cfg.alpha,
            redraws=redraws,
        )
    return results


def null_test(
    sample: ThreeClassSample,
    measure: Measure,
    method: Method,
    cfg: BootstrapConfig,
    key: tuple[int, ...] = (),
) -> TestResult:
    """Pooled-null bootstrap test for one statistic."""
    statistic = require_supported(measure, method)
    return null_tests(sample, [statistic], cfg, key)[statistic]
