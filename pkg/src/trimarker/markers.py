"""
Biomarker data: CSV ingestion, orientation, Shapiro-Wilk screening and the
end-to-end analysis of one marker.
"""

import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy import stats

from .config import settings
from .errors import DataError, UsageError
from .estimators import fit_box_cox
from .inference import bootstrap_many, interpret_ovl, null_tests
from .models import (
    BootstrapConfig,
    ClassNormality,
    MarkerDataset,
    MarkerReport,
    Measure,
    Method,
    NormalityReport,
    Statistic,
    ThreeClassSample,
)
from .utils import stable_key

logger = logging.getLogger(__name__)

SHAPIRO_MIN = 3
SHAPIRO_MAX = 5000

# Flag values of --methods
AUTO = "auto"
METHOD_NAMES = {
    "normal": Method.NORMAL,
    "boxcox": Method.BOXCOX_NORMAL,
    "kernel": Method.KERNEL,
    "empirical": Method.EMPIRICAL,
}
DEFAULT_METHODS = (AUTO, "kernel", "empirical")


# ============================================================================
# Loading
# ============================================================================


def load_csv(
    path: Union[str, Path],
    value_column: str,
    class_column: str,
    class_order: Sequence[str],
) -> MarkerDataset:
    """
    Read one marker from a comma-separated file with a header row.

    Rows whose value or class label is empty are dropped and counted. Row
    numbers in errors count the header as row 1.

    Raises:
        DataError: Missing file or column, unknown class label, unparseable
            value, or fewer than 2 usable rows in a class
    """
    labels = tuple(label.strip() for label in class_order)
    if len(labels) != 3 or len(set(labels)) != 3:
        raise UsageError(f"class order must name three distinct labels, got {list(class_order)}")

    path = Path(path)
    if not path.is_file():
        raise DataError(f"input file not found: {path}")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    for column in (value_column, class_column):
        if column not in frame.columns:
            raise DataError(f"column '{column}' not in {path}; available: {', '.join(frame.columns)}")

    groups: dict[str, list[float]] = {label: [] for label in labels}
    dropped = 0
    for index, (raw_value, raw_label) in enumerate(zip(frame[value_column], frame[class_column])):
        row = index + 2
        value_text, label = raw_value.strip(), raw_label.strip()
        if not value_text or not label or value_text.upper() in ("NA", "NAN"):
            dropped += 1
            continue
        if label not in groups:
            raise DataError(f"unknown class label '{label}' (expected one of {', '.join(labels)})", row=row)
        try:
            value = float(value_text)
        except ValueError:
            raise DataError(f"cannot parse '{value_text}' as a number in column '{value_column}'", row=row)
        if not np.isfinite(value):
            raise DataError(f"value '{value_text}' is not finite", row=row)
        groups[label].append(value)

    if dropped:
        logger.warning("Dropped %d rows of %s with a missing value or class label", dropped, path.name)
    for label, values in groups.items():
        if len(values) < 2:
            raise DataError(f"class '{label}' has {len(values)} usable rows; at least 2 are needed")

    return MarkerDataset(
        marker_name=value_column,
        sample=ThreeClassSample.from_arrays(*(groups[label] for label in labels)),
        class_labels=labels,
        dropped_rows=dropped,
    )


def orient(dataset: MarkerDataset) -> MarkerDataset:
    """
    Make class means increase with the class order.

    Strictly decreasing means flip the sign of every value; non-monotone means
    leave the data unchanged with a warning. Orienting twice changes nothing.
    """
    if dataset.oriented:
        return dataset
    means = [float(values.mean()) for values in dataset.sample.classes]
    if means[0] > means[1] > means[2]:
        logger.info("Class means of %s decrease; negating the marker", dataset.marker_name)
        return dataset.model_copy(
            update={"sample": dataset.sample.map(np.negative), "oriented": True, "orientation_sign": -1}
        )
    if means[0] < means[1] < means[2]:
        return dataset.model_copy(update={"oriented": True})
    message = "class means are not monotone ({}); values left as recorded".format(
        ", ".join(f"{mean:.4g}" for mean in means)
    )
    logger.warning("%s: %s", dataset.marker_name, message)
    return dataset.model_copy(update={"oriented": True, "warnings": (*dataset.warnings, message)})


# ============================================================================
# Normality screening
# ============================================================================


def shapiro_wilk(data) -> tuple[float, float]:
    """
    Shapiro-Wilk W and p-value (Royston's approximation).

    Raises:
        DataError: Fewer than 3 or more than 5000 values, or constant data
    """
    values = np.asarray(data, dtype=float)
    if not SHAPIRO_MIN <= values.size <= SHAPIRO_MAX:
        raise DataError(f"Shapiro-Wilk needs {SHAPIRO_MIN} to {SHAPIRO_MAX} values, got {values.size}")
    if np.ptp(values) == 0:
        raise DataError("Shapiro-Wilk is undefined for constant data")
    result = stats.shapiro(values)
    return min(float(result.statistic), 1.0), float(result.pvalue)


def normality_report(dataset: MarkerDataset, threshold: Optional[float] = None) -> NormalityReport:
    threshold = settings.normality_threshold if threshold is None else threshold
    entries = []
    for label, values in zip(dataset.class_labels, dataset.sample.classes):
        w, p = shapiro_wilk(values)
        entries.append(ClassNormality(label=label, n=values.size, w=w, p_value=p))
    return NormalityReport(
        classes=tuple(entries),
        threshold=threshold,
        overall_normal=all(entry.p_value >= threshold for entry in entries),
    )


# ============================================================================
# Analysis
# ============================================================================


def resolve_statistics(methods: Iterable[Union[str, Method]], parametric: Method) -> list[Statistic]:
    """
    Statistics requested by method names, in request order without repeats.

    ``auto`` stands for ``parametric``; every method yields OVL and VUS except
    the empirical one, which yields VUS only.
    """
    statistics: list[Statistic] = []
    for name in methods:
        if isinstance(name, Method):
            method = name
        elif name.strip().lower() == AUTO:
            method = parametric
        elif name.strip().lower() in METHOD_NAMES:
            method = METHOD_NAMES[name.strip().lower()]
        else:
            raise UsageError(f"unknown method '{name}'; choose from {AUTO}, {', '.join(METHOD_NAMES)}")
        measures = [Measure.VUS] if method is Method.EMPIRICAL else [Measure.OVL, Measure.VUS]
        for measure in measures:
            statistic = Statistic(measure=measure, method=method)
            if statistic not in statistics:
                statistics.append(statistic)
    return statistics


def analyze_marker(
    dataset: MarkerDataset,
    methods: Iterable[Union[str, Method]] = DEFAULT_METHODS,
    cfg: Optional[BootstrapConfig] = None,
    normality_threshold: Optional[float] = None,
    with_tests: bool = False,
) -> MarkerReport:
    """
    Estimates with percentile CIs (and optionally pooled-null tests) for one
    oriented marker.

    The parametric method is NORMAL when every class passes the Shapiro-Wilk
    screen and BOXCOX_NORMAL otherwise; each OVL estimate carries its band.
    """
    cfg = cfg or BootstrapConfig(
        B=settings.bootstrap_resamples,
        level=settings.confidence_level,
        alpha=settings.significance_level,
    )
    dataset = orient(dataset)
    normality = normality_report(dataset, normality_threshold)
    parametric = Method.NORMAL if normality.overall_normal else Method.BOXCOX_NORMAL
    statistics = resolve_statistics(methods, parametric)
    logger.info(
        "Analyzing %s: sizes %s, statistics %s, B=%d",
        dataset.marker_name,
        dataset.sample.sizes,
        ", ".join(statistic.label for statistic in statistics),
        cfg.B,
    )

    warnings = list(dataset.warnings)
    if dataset.dropped_rows:
        warnings.append(f"{dataset.dropped_rows} rows with missing data were dropped")
    if any(statistic.method is Method.BOXCOX_NORMAL for statistic in statistics):
        fit = fit_box_cox(dataset.sample, warn=False)
        if fit.shift:
            warnings.append(f"Box-Cox needed positive data; values were shifted by {fit.shift:.6g}")
        if fit.at_boundary:
            warnings.append(f"Box-Cox lambda {fit.lam:.4g} is at the edge of its search domain")

    key = (stable_key(dataset.marker_name),)
    estimates = [
        result.model_copy(update={"band": interpret_ovl(result.value).value})
        if result.measure is Measure.OVL
        else result
        for result in bootstrap_many(dataset.sample, statistics, cfg, key)
    ]
    tests = list(null_tests(dataset.sample, statistics, cfg, key).values()) if with_tests else []

    return MarkerReport(
        marker=dataset.marker_name,
        class_labels=dataset.class_labels,
        sizes=dataset.sample.sizes,
        orientation_sign=dataset.orientation_sign,
        normality=normality,
        parametric_method=parametric,
        bootstrap=cfg,
        estimates=estimates,
        tests=tests,
        warnings=warnings,
    )
