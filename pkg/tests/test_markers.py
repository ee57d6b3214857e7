"""
Tests for marker loading, orientation, normality screening and analysis.
"""

import numpy as np
import pytest
from scipy import stats

from conftest import write_marker_csv
from trimarker.errors import DataError, UsageError
from trimarker.markers import (
    analyze_marker,
    load_csv,
    normality_report,
    orient,
    resolve_statistics,
    shapiro_wilk,
)
from trimarker.models import BootstrapConfig, MarkerDataset, Method, ThreeClassSample

ORDER = ["D-", "D0", "D+"]


def dataset_with_means(means) -> MarkerDataset:
    rng = np.random.default_rng(1)
    return MarkerDataset(
        marker_name="m",
        sample=ThreeClassSample.from_arrays(*(rng.normal(mean, 0.1, 20) for mean in means)),
        class_labels=("a", "b", "c"),
    )


# ============================================================================
# Loading
# ============================================================================


def test_load_csv(marker_csv):
    dataset = load_csv(marker_csv, "marker", "group", ORDER)
    assert dataset.marker_name == "marker"
    assert dataset.class_labels == ("D-", "D0", "D+")
    assert dataset.sample.sizes == (30, 25, 20)
    assert dataset.dropped_rows == 0
    assert not dataset.oriented


def test_load_csv_follows_class_order(marker_csv):
    dataset = load_csv(marker_csv, "marker", "group", ["D+", "D0", "D-"])
    assert dataset.sample.sizes == (20, 25, 30)


def test_load_csv_drops_missing_rows(tmp_path, rng):
    path = write_marker_csv(
        tmp_path / "gaps.csv",
        {label: rng.normal(0, 1, 5) for label in ORDER},
        extra_rows=["x1,,D0,A", "x2,NA,D+,A", "x3,1.0,,A"],
    )
    dataset = load_csv(path, "marker", "group", ORDER)
    assert dataset.dropped_rows == 3
    assert dataset.sample.sizes == (5, 5, 5)


@pytest.mark.parametrize(
    "extra_row,message",
    [
        ("x4,1.0,D9,A", "row 17: unknown class label 'D9'"),
        ("x5,abc,D0,A", "row 17: cannot parse 'abc'"),
        ("x6,inf,D0,A", "row 17"),
    ],
)
def test_load_csv_bad_rows(tmp_path, rng, extra_row, message):
    path = write_marker_csv(tmp_path / "bad.csv", {label: rng.normal(0, 1, 5) for label in ORDER}, [extra_row])
    with pytest.raises(DataError, match=message) as excinfo:
        load_csv(path, "marker", "group", ORDER)
    assert excinfo.value.row == 17


def test_load_csv_small_class(tmp_path, rng):
    path = write_marker_csv(
        tmp_path / "small.csv", {"D-": rng.normal(0, 1, 5), "D0": rng.normal(0, 1, 5), "D+": [1.0]}
    )
    with pytest.raises(DataError, match="'D\\+' has 1 usable rows"):
        load_csv(path, "marker", "group", ORDER)


def test_load_csv_missing_inputs(tmp_path, marker_csv):
    with pytest.raises(DataError, match="not found"):
        load_csv(tmp_path / "absent.csv", "marker", "group", ORDER)
    with pytest.raises(DataError, match="column 'volume'"):
        load_csv(marker_csv, "volume", "group", ORDER)
    with pytest.raises(UsageError):
        load_csv(marker_csv, "marker", "group", ["D-", "D-", "D+"])


# ============================================================================
# Orientation
# ============================================================================


def test_orient_decreasing_marker(marker_csv):
    dataset = load_csv(marker_csv, "marker", "group", ORDER)
    oriented = orient(dataset)
    assert oriented.orientation_sign == -1
    assert oriented.oriented
    np.testing.assert_array_equal(oriented.sample.class1, -dataset.sample.class1)
    assert orient(oriented) == oriented


def test_orient_increasing_marker():
    dataset = dataset_with_means([0.0, 1.0, 2.0])
    oriented = orient(dataset)
    assert oriented.orientation_sign == 1
    assert oriented.sample == dataset.sample
    assert oriented.warnings == ()


def test_orient_non_monotone_marker():
    dataset = dataset_with_means([0.0, 1.0, 0.5])
    oriented = orient(dataset)
    assert oriented.orientation_sign == 1
    assert oriented.sample == dataset.sample
    assert len(oriented.warnings) == 1
    assert "not monotone" in oriented.warnings[0]
    assert orient(oriented) == oriented


# ============================================================================
# Normality screening
# ============================================================================


def test_shapiro_wilk_rejects_exponential():
    values = np.random.default_rng(2).exponential(1.0, 50)
    w, p = shapiro_wilk(values)
    assert 0 < w <= 1
    assert p < 0.01


def test_shapiro_wilk_null_calibration():
    p_values = [shapiro_wilk(np.random.default_rng(seed).normal(size=50))[1] for seed in range(2000)]
    rejection = np.mean(np.array(p_values) < 0.05)
    assert abs(rejection - 0.05) <= 0.015
    assert stats.kstest(p_values, "uniform").statistic < 0.05


@pytest.mark.parametrize("values", [[1.0, 2.0], [4.0, 4.0, 4.0], np.arange(5001.0)])
def test_shapiro_wilk_invalid_input(values):
    with pytest.raises(DataError):
        shapiro_wilk(values)


def test_normality_report(marker_csv):
    dataset = orient(load_csv(marker_csv, "marker", "group", ORDER))
    report = normality_report(dataset, threshold=1e-9)
    assert [entry.label for entry in report.classes] == ORDER
    assert [entry.n for entry in report.classes] == [30, 25, 20]
    assert report.overall_normal


# ============================================================================
# Analysis
# ============================================================================


def test_resolve_statistics():
    labels = [s.label for s in resolve_statistics(["auto", "kernel", "empirical"], Method.NORMAL)]
    assert labels == ["OVL_N", "VUS_N", "OVL_K", "VUS_K", "VUS_E"]
    labels = [s.label for s in resolve_statistics(["auto", "boxcox"], Method.BOXCOX_NORMAL)]
    assert labels == ["OVL_N^BC", "VUS_N^BC"]
    assert len(resolve_statistics(["normal", "auto", "NORMAL"], Method.NORMAL)) == 2
    with pytest.raises(UsageError):
        resolve_statistics(["spline"], Method.NORMAL)


def test_analyze_separated_marker(tmp_path, rng):
    path = write_marker_csv(
        tmp_path / "separated.csv",
        {"D-": rng.normal(0, 1, 25), "D0": rng.normal(50, 1, 25), "D+": rng.normal(100, 1, 25)},
    )
    dataset = load_csv(path, "marker", "group", ORDER)
    report = analyze_marker(dataset, cfg=BootstrapConfig(B=20, seed=1), with_tests=True)
    assert report.orientation_sign == 1
    assert report.estimate_for("VUS_E").value == 1.0
    assert report.estimate_for("OVL_K").value < 0.01
    assert report.estimate_for("OVL_K").band == "Excellent"
    for estimate in report.estimates:
        assert estimate.ci is not None
        assert (estimate.band is not None) == (estimate.measure.value == "OVL")
    assert all(test.reject for test in report.tests)


def test_analyze_marker_orients_data(marker_csv):
    dataset = load_csv(marker_csv, "marker", "group", ORDER)
    report = analyze_marker(dataset, ["empirical"], BootstrapConfig(B=10, seed=2), normality_threshold=1e-9)
    assert report.orientation_sign == -1
    assert report.parametric_method is Method.NORMAL
    assert [estimate.label for estimate in report.estimates] == ["VUS_E"]
    assert report.estimate_for("VUS_E").value > 0.8
    assert report.tests == []


def test_analyze_marker_reports_dropped_rows(tmp_path, rng):
    path = write_marker_csv(
        tmp_path / "gaps.csv",
        {"D-": rng.normal(0, 1, 10), "D0": rng.normal(2, 1, 10), "D+": rng.normal(4, 1, 10)},
        extra_rows=["x1,,D0,A"],
    )
    report = analyze_marker(load_csv(path, "marker", "group", ORDER), ["empirical"], BootstrapConfig(B=5, seed=3))
    assert any("1 rows" in warning for warning in report.warnings)


def test_empirical_vus_rank_invariant_end_to_end(tmp_path, rng):
    groups = {"D-": rng.normal(0, 1, 20), "D0": rng.normal(2, 1, 20), "D+": rng.normal(4, 1, 20)}
    raw = write_marker_csv(tmp_path / "raw.csv", groups)
    exponentiated = write_marker_csv(tmp_path / "exp.csv", {label: np.exp(v) for label, v in groups.items()})
    cfg = BootstrapConfig(B=5, seed=4)
    first = analyze_marker(load_csv(raw, "marker", "group", ORDER), ["empirical"], cfg)
    second = analyze_marker(load_csv(exponentiated, "marker", "group", ORDER), ["empirical"], cfg)
    assert first.estimate_for("VUS_E").value == second.estimate_for("VUS_E").value
    assert first.estimate_for("VUS_E").ci == second.estimate_for("VUS_E").ci
