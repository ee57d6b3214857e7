"""
Report emission: aligned text tables, CSV/JSON rows for simulation results,
JSON marker reports, and density grids for external plotting.
"""

import logging
from pathlib import Path
from typing import Iterable, Optional

import numpy as np
import pandas as pd
from scipy import stats

from .estimators import fit_normal_triple, kernel_fit
from .models import BiasRow, MarkerDataset, MarkerReport, PowerRow, ScenarioConfig
from .scenarios import bias_reference, power_reference, power_statistics

logger = logging.getLogger(__name__)

GRID_MARGIN = 3.0
FLOAT_FORMAT = "{:.4f}".format


# ============================================================================
# Simulation rows
# ============================================================================


def power_records(rows: Iterable[PowerRow], table_id: str, scenario: Optional[ScenarioConfig] = None) -> list[dict]:
    """
    One record per (size triple, statistic) with the published proportion,
    when one exists for that cell, in ``reference_value``.
    """
    columns = [statistic.label for statistic in power_statistics(scenario)] if scenario else []
    records = []
    for row in rows:
        published = power_reference(row.scenario_id, row.sizes) if scenario else None
        for label, proportion in row.proportions.items():
            reference = published[columns.index(label)] if published and label in columns else None
            n1, n2, n3 = row.sizes
            records.append(
                {
                    "table_id": table_id,
                    "scenario": row.scenario_id,
                    "n1": n1,
                    "n2": n2,
                    "n3": n3,
                    "statistic": label,
                    "proportion": proportion,
                    "mc_se": row.mc_se[label],
                    "reference_value": reference,
                    "reps": row.reps,
                    "failures": row.failures,
                    "flagged": row.flagged,
                }
            )
    return records


def bias_records(rows: Iterable[BiasRow], table_id: str) -> list[dict]:
    """One record per (scenario, estimator, n) with the published bias, RMSE and coverage."""
    records = []
    for row in rows:
        for cell in row.cells:
            reference = bias_reference(row.scenario_id, row.estimator, cell.n) or (None, None, None)
            records.append(
                {
                    "table_id": table_id,
                    "scenario": row.scenario_id,
                    "estimator": row.estimator,
                    "n": cell.n,
                    "bias": cell.bias,
                    "rmse": cell.rmse,
                    "coverage": cell.coverage,
                    "reference_bias": reference[0],
                    "reference_rmse": reference[1],
                    "reference_coverage": reference[2],
                    "reps": cell.reps,
                    "failures": cell.failures,
                }
            )
    return records


def format_records(records: list[dict]) -> str:
    """Aligned text table; missing published values print as '-'."""
    if not records:
        return "(no rows)"
    frame = pd.DataFrame.from_records(records).drop(columns=["table_id"], errors="ignore")
    return frame.to_string(index=False, float_format=FLOAT_FORMAT, na_rep="-")


def rows_to_csv(records: list[dict], path: Optional[Path] = None) -> str:
    """CSV text of the records, also written to ``path`` when given."""
    text = pd.DataFrame.from_records(records).to_csv(index=False)
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
        logger.info("Wrote %d rows to %s", len(records), path)
    return text


def rows_to_json(records: list[dict], path: Optional[Path] = None) -> str:
    """JSON array of the records, also written to ``path`` when given."""
    text = pd.DataFrame.from_records(records).to_json(orient="records", indent=2, double_precision=15)
    if path is not None:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text, encoding="utf-8")
        logger.info("Wrote %d rows to %s", len(records), path)
    return text


# ============================================================================
# Marker reports
# ============================================================================


def emit_report(report: MarkerReport, path: Optional[Path] = None) -> str:
    text = report.model_dump_json(indent=2)
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def parse_report(text: str) -> MarkerReport:
    return MarkerReport.model_validate_json(text)


def format_report(report: MarkerReport) -> str:
    """Human-readable report: class summary, normality screening, estimates and tests."""
    lines = [f"Marker: {report.marker}"]
    sign = "negated" if report.orientation_sign == -1 else "as recorded"
    lines.append(f"Classes: {', '.join(f'{label} (n={n})' for label, n in zip(report.class_labels, report.sizes))}")
    lines.append(f"Orientation: {sign}")
    lines.append("")

    lines.append(f"Shapiro-Wilk (threshold {report.normality.threshold:g}):")
    normality = pd.DataFrame(
        [(entry.label, entry.n, entry.w, entry.p_value) for entry in report.normality.classes],
        columns=["class", "n", "W", "p"],
    )
    lines.append(normality.to_string(index=False, float_format=FLOAT_FORMAT))
    verdict = "normal" if report.normality.overall_normal else "not normal"
    parametric = report.parametric_method.value if report.parametric_method else "-"
    lines.append(f"All classes {verdict}; parametric estimator: {parametric}")
    lines.append("")

    estimates = pd.DataFrame(
        [
            {
                "statistic": estimate.label,
                "value": estimate.value,
                "ci_lo": estimate.ci.lo if estimate.ci else np.nan,
                "ci_hi": estimate.ci.hi if estimate.ci else np.nan,
                "band": estimate.band or "",
            }
            for estimate in report.estimates
        ]
    )
    lines.append(f"Estimates ({report.bootstrap.level:.0%} percentile CI, B={report.bootstrap.B}):")
    lines.append(estimates.to_string(index=False, float_format=FLOAT_FORMAT, na_rep="-"))

    if report.tests:
        tests = pd.DataFrame(
            [
                {
                    "statistic": test.label,
                    "observed": test.statistic,
                    "null_quantile": test.null_quantile,
                    "reject": "yes" if test.reject else "no",
                }
                for test in report.tests
            ]
        )
        lines.append("")
        lines.append(f"Pooled-null tests (alpha={report.bootstrap.alpha:g}, B={report.bootstrap.B}):")
        lines.append(tests.to_string(index=False, float_format=FLOAT_FORMAT))

    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    return "\n".join(lines)


# ============================================================================
# Plot data
# ============================================================================


def density_grid(dataset: MarkerDataset, points: int = 200) -> pd.DataFrame:
    """
    Kernel pdf and cdf and the fitted normal pdf of each class on a common grid.

    The grid spans the pooled data range widened by three of the largest
    bandwidths, so every kernel density is close to zero at both ends.
    """
    if points < 2:
        raise ValueError(f"points must be at least 2, got {points}")
    kernels = kernel_fit(dataset.sample)
    normal = fit_normal_triple(dataset.sample)
    support = kernels.support(GRID_MARGIN)
    x = np.linspace(support.lo, support.hi, points)

    frames = []
    for index, label in enumerate(dataset.class_labels):
        kernel = kernels.classes[index]
        frames.append(
            pd.DataFrame(
                {
                    "class": label,
                    "x": x,
                    "kernel_pdf": kernel.pdf(x),
                    "kernel_cdf": kernel.cdf(x),
                    "normal_pdf": stats.norm.pdf(x, loc=normal.mu[index], scale=normal.sigma[index]),
                }
            )
        )
    return pd.concat(frames, ignore_index=True)
