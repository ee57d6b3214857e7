"""
Monte Carlo engines: power/Type-I comparison of the five statistics, bias/RMSE/
coverage of the OVL estimators, and reproduction of the published tables.

Replication r at size triple (n1, n2, n3) of scenario s draws from the substream
(seed, key(s), n1, n2, n3, r), so any worker count gives the same rows.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Iterable, Mapping, Optional, Union

import numpy as np

from . import distributions
from .config import settings
from .errors import DataError, NumericalError, UnknownTableError, UsageError
from .estimators import evaluate_statistics
from .inference import bootstrap_distribution, null_tests, percentile_interval, stratified_resample
from .models import (
    BiasCell,
    BiasRow,
    Measure,
    Method,
    PowerRow,
    Scale,
    ScenarioConfig,
    Statistic,
    TableReproduction,
    ThreeClassSample,
)
from .report import bias_records, format_records, power_records
from .scenarios import (
    BIAS_SCENARIOS,
    BIAS_SIZES,
    DESK_SIZES,
    POWER_SCENARIOS,
    builtin_scenarios,
    parametric_method,
    power_statistics,
)
from .utils import stable_key, substream

logger = logging.getLogger(__name__)

FAILURE_FLAG_RATE = 0.01
SAMPLE_STREAM = 0
BOOTSTRAP_STREAM = 1

Estimator = Union[Statistic, Callable[[ThreeClassSample], float]]


def draw_sample(scenario: ScenarioConfig, sizes: tuple[int, int, int], stream: np.random.Generator) -> ThreeClassSample:
    """One three-class sample from the scenario's distributions."""
    return ThreeClassSample.from_arrays(
        *(distributions.sample(spec, n, stream) for spec, n in zip(scenario.specs, sizes))
    )


def replication_key(scenario: ScenarioConfig, sizes: tuple[int, int, int], rep: int) -> tuple[int, ...]:
    return (stable_key(scenario.id), *sizes, rep)


def _run_tasks(tasks: list[Callable], workers: int) -> list:
    if workers <= 1 or len(tasks) <= 1:
        return [task() for task in tasks]
    chunksize = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, tasks, chunksize=chunksize))


def _call(task: Callable):
    return task()


# ============================================================================
# Power study
# ============================================================================


def _power_replication(
    scenario: ScenarioConfig, statistics: list[Statistic], sizes: tuple[int, int, int], rep: int, B: int
) -> Optional[tuple[bool, ...]]:
    key = replication_key(scenario, sizes, rep)
    sample = draw_sample(scenario, sizes, substream(scenario.seed, *key, SAMPLE_STREAM))
    cfg = scenario.boot.model_copy(update={"B": B, "seed": scenario.seed})
    try:
        results = null_tests(sample, statistics, cfg, key=(*key, BOOTSTRAP_STREAM))
    except (NumericalError, DataError) as exc:
        logger.warning("Replication %d of %s at %s failed: %s", rep, scenario.id, sizes, exc)
        return None
    return tuple(results[statistic].reject for statistic in statistics)


def run_power_study(
    scenario: ScenarioConfig,
    statistics: Optional[Iterable[Statistic]] = None,
    reps: Optional[int] = None,
    B: Optional[int] = None,
    sizes: Optional[Iterable[tuple[int, int, int]]] = None,
    workers: Optional[int] = None,
) -> list[PowerRow]:
    """
    Rejection proportions of the pooled-null bootstrap tests.

    Args:
        scenario: Distributions, sizes, replication count and seed
        statistics: Defaults to the five table columns, with the parametric
            columns NORMAL for all-normal scenarios and BOXCOX_NORMAL otherwise
        reps, B, sizes: Overrides of the scenario's values
        workers: Worker processes (defaults to ``settings.workers``)

    Returns:
        list[PowerRow]: One row per size triple; empty when ``reps`` is 0
    """
    reps = scenario.reps if reps is None else reps
    if reps < 0:
        raise UsageError(f"reps must be non-negative, got {reps}")
    if reps == 0:
        return []
    statistics = list(statistics) if statistics else power_statistics(scenario)
    B = scenario.boot.B if B is None else B
    workers = settings.workers if workers is None else workers

    rows = []
    for triple in [tuple(t) for t in (sizes or scenario.sizes)]:
        logger.info("Power study %s at %s: %d replications, B=%d", scenario.id, triple, reps, B)
        tasks = [partial(_power_replication, scenario, statistics, triple, rep, B) for rep in range(reps)]
        outcomes = [outcome for outcome in _run_tasks(tasks, workers) if outcome is not None]
        used = len(outcomes)
        failures = reps - used
        rejections = np.array(outcomes, dtype=float).reshape(used, len(statistics))
        proportions, errors = {}, {}
        for column, statistic in enumerate(statistics):
            p = float(rejections[:, column].mean()) if used else 0.0
            proportions[statistic.label] = p
            errors[statistic.label] = math.sqrt(p * (1.0 - p) / used) if used else 0.0
        flagged = failures > FAILURE_FLAG_RATE * reps
        if flagged:
            logger.warning("%s at %s: %d of %d replications failed", scenario.id, triple, failures, reps)
        rows.append(
            PowerRow(
                scenario_id=scenario.id,
                sizes=triple,
                reps=used,
                proportions=proportions,
                mc_se=errors,
                failures=failures,
                flagged=flagged,
            )
        )
    return rows


# ============================================================================
# Bias study
# ============================================================================


def _statistic_value(statistic: Statistic, sample: ThreeClassSample) -> float:
    return evaluate_statistics(sample, [statistic], warn=False)[statistic]


def default_bias_estimators(scenario: ScenarioConfig) -> dict[str, Statistic]:
    """
    OVL_N and OVL_K as the bias table labels them. OVL_N is the parametric
    estimator, fitted after a Box-Cox transformation for non-normal scenarios.
    """
    return {
        "OVL_N": Statistic(measure=Measure.OVL, method=parametric_method(scenario)),
        "OVL_K": Statistic(measure=Measure.OVL, method=Method.KERNEL),
    }


def _bias_replication(
    scenario: ScenarioConfig,
    estimators: dict[str, Callable[[ThreeClassSample], float]],
    n: int,
    rep: int,
    B: int,
    level: float,
) -> dict[str, Optional[tuple[float, float, float]]]:
    sizes = (n, n, n)
    key = replication_key(scenario, sizes, rep)
    sample = draw_sample(scenario, sizes, substream(scenario.seed, *key, SAMPLE_STREAM))
    outcome = {}
    for index, (label, estimator) in enumerate(estimators.items()):
        try:
            point = float(estimator(sample))
            replicates, _ = bootstrap_distribution(
                sample,
                lambda resample: [estimator(resample)],
                B,
                scenario.seed,
                stratified_resample,
                (*key, BOOTSTRAP_STREAM, index),
            )
            lo, hi = percentile_interval(replicates[:, 0], level)
            outcome[label] = (point, lo, hi)
        except (NumericalError, DataError) as exc:
            logger.warning("Replication %d of %s (n=%d, %s) failed: %s", rep, scenario.id, n, label, exc)
            outcome[label] = None
    return outcome


def run_bias_study(
    scenarios: Iterable[ScenarioConfig],
    reps: Optional[int] = None,
    B: Optional[int] = None,
    sizes: Iterable[int] = BIAS_SIZES,
    estimators: Optional[Mapping[str, Estimator]] = None,
    workers: Optional[int] = None,
    level: Optional[float] = None,
) -> list[BiasRow]:
    """
    Bias, RMSE and percentile-CI coverage of OVL estimators against the
    scenario's theoretical OVL, at n1 = n2 = n3 = n.

    ``estimators`` maps a label to a Statistic or to any callable returning a
    value for a ThreeClassSample; callables must be picklable when workers > 1.
    """
    workers = settings.workers if workers is None else workers
    rows = []
    for scenario in scenarios:
        if scenario.theoretical_ovl is None:
            raise UsageError(f"scenario '{scenario.id}' has no theoretical OVL; the bias study needs one")
        chosen = estimators if estimators is not None else default_bias_estimators(scenario)
        callables = {
            label: partial(_statistic_value, estimator) if isinstance(estimator, Statistic) else estimator
            for label, estimator in chosen.items()
        }
        scenario_reps = scenario.reps if reps is None else reps
        scenario_B = scenario.boot.B if B is None else B
        scenario_level = scenario.boot.level if level is None else level
        truth = scenario.theoretical_ovl

        cells: dict[str, list[BiasCell]] = {label: [] for label in callables}
        for n in sizes:
            logger.info("Bias study %s at n=%d: %d replications, B=%d", scenario.id, n, scenario_reps, scenario_B)
            tasks = [
                partial(_bias_replication, scenario, callables, n, rep, scenario_B, scenario_level)
                for rep in range(scenario_reps)
            ]
            outcomes = _run_tasks(tasks, workers)
            for label in callables:
                results = [outcome[label] for outcome in outcomes if outcome[label] is not None]
                used = len(results)
                if used:
                    errors = np.array([point - truth for point, _, _ in results])
                    bias = float(errors.mean())
                    rmse = float(np.sqrt(np.mean(errors**2)))
                    coverage = float(np.mean([lo <= truth <= hi for _, lo, hi in results]))
                else:
                    bias = rmse = coverage = None
                cells[label].append(
                    BiasCell(n=n, bias=bias, rmse=rmse, coverage=coverage, reps=used, failures=scenario_reps - used)
                )
        rows.extend(BiasRow(scenario_id=scenario.id, estimator=label, cells=cells[label]) for label in callables)
    return rows


# ============================================================================
# Table reproduction
# ============================================================================

BIAS_TABLE = "bias/tt1"


def table_ids() -> list[str]:
    return [BIAS_TABLE] + [f"power/{scenario_id}" for scenario_id in POWER_SCENARIOS]


def scale_settings(scale: Scale) -> tuple[int, int]:
    """(reps, B) for a run scale."""
    if Scale(scale) is Scale.DESK:
        return settings.desk_reps, settings.desk_bootstrap
    return settings.full_reps, settings.full_bootstrap


def reproduce_table(
    table_id: str,
    scale: Scale = Scale.DESK,
    workers: Optional[int] = None,
    seed: Optional[int] = None,
) -> TableReproduction:
    """
    Rerun the study behind a published table and set the computed values
    beside the published ones.

    DESK scale uses ``settings.desk_reps`` and ``settings.desk_bootstrap`` and,
    for power tables, only the (20,20,20), (50,50,50) and (100,100,100) triples.
    """
    scale = Scale(scale)
    reps, B = scale_settings(scale)
    registry = builtin_scenarios()

    def seeded(scenario: ScenarioConfig) -> ScenarioConfig:
        return scenario if seed is None else scenario.model_copy(update={"seed": seed})

    if table_id == BIAS_TABLE:
        scenarios = [seeded(registry[bias_id]) for bias_id in BIAS_SCENARIOS]
        rows = run_bias_study(scenarios, reps=reps, B=B, workers=workers)
        records = bias_records(rows, table_id)
    elif table_id.startswith("power/") and table_id.removeprefix("power/") in POWER_SCENARIOS:
        scenario = seeded(registry[table_id.removeprefix("power/")])
        sizes = DESK_SIZES if scale is Scale.DESK else scenario.sizes
        rows = run_power_study(scenario, reps=reps, B=B, sizes=sizes, workers=workers)
        records = power_records(rows, table_id, scenario)
    else:
        raise UnknownTableError(table_id, table_ids())

    return TableReproduction(table_id=table_id, scale=scale, records=records, text=format_records(records))
