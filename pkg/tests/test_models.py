"""
Unit tests for the pydantic models.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from trimarker.models import (
    BoxCoxFit,
    ClassNormality,
    ConfidenceInterval,
    EstimateResult,
    Interval,
    MarkerDataset,
    Measure,
    Method,
    NormalityReport,
    ScenarioConfig,
    Statistic,
    ThreeClassSample,
)
from trimarker.distributions import parse_spec


def test_three_class_sample():
    sample = ThreeClassSample.from_arrays([1, 2], [3.0, 4.0, 5.0], np.array([6.0, 7.0]))
    assert sample.sizes == (2, 3, 2)
    assert sample.class1.dtype == float
    np.testing.assert_array_equal(sample.pooled(), [1, 2, 3, 4, 5, 6, 7])
    assert sample.map(lambda values: values * 2).class3.tolist() == [12.0, 14.0]


def test_three_class_sample_is_read_only():
    sample = ThreeClassSample.from_arrays([1.0, 2.0], [3.0, 4.0], [5.0, 6.0])
    with pytest.raises(ValueError):
        sample.class1[0] = 10.0


@pytest.mark.parametrize("bad", [[], [1.0, float("nan")], [1.0, float("inf")]])
def test_three_class_sample_rejects_bad_values(bad):
    with pytest.raises(ValidationError):
        ThreeClassSample.from_arrays(bad, [1.0, 2.0], [1.0, 2.0])


def test_interval():
    interval = Interval(lo=-1, hi=3)
    assert interval.width == 4
    assert interval.contains(3)
    assert not interval.contains(3.1)
    with pytest.raises(ValidationError):
        Interval(lo=1, hi=1)


def test_statistic_labels():
    assert Statistic(measure=Measure.OVL, method=Method.BOXCOX_NORMAL).label == "OVL_N^BC"
    for label in ("OVL_N", "VUS_N", "OVL_N^BC", "VUS_N^BC", "OVL_K", "VUS_K", "VUS_E"):
        assert Statistic.from_label(label).label == label
    assert Statistic.from_label("vus_e").method is Method.EMPIRICAL
    with pytest.raises(ValueError):
        Statistic.from_label("AUC_N")


def test_confidence_interval_order():
    with pytest.raises(ValidationError):
        ConfidenceInterval(lo=0.6, hi=0.5, level=0.95, B=10)
    with pytest.raises(ValidationError):
        ConfidenceInterval(lo=0.4, hi=0.5, level=1.0, B=10)


def test_estimate_result_range():
    assert EstimateResult(measure=Measure.VUS, method=Method.KERNEL, value=0.3).label == "VUS_K"
    with pytest.raises(ValidationError):
        EstimateResult(measure=Measure.VUS, method=Method.KERNEL, value=1.2)


def test_box_cox_fit_inside_domain():
    with pytest.raises(ValidationError):
        BoxCoxFit(lam=6.0, loglik=-3.0, search_domain=Interval(lo=-5, hi=5))


def test_scenario_config_defaults():
    scenario = ScenarioConfig(
        id="s1", f1=parse_spec("normal(0,1)"), f2=parse_spec("normal(0,1)"), f3=parse_spec("normal(0,1)")
    )
    assert len(scenario.sizes) == 8
    assert scenario.reps == 1000
    assert scenario.boot.B == 500
    with pytest.raises(ValidationError):
        scenario.model_validate({**scenario.model_dump(), "id": "has space"})
    with pytest.raises(ValidationError):
        scenario.model_validate({**scenario.model_dump(), "sizes": [(1, 20, 20)]})


def test_marker_dataset_validation():
    sample = ThreeClassSample.from_arrays([1.0, 2.0], [3.0, 4.0], [5.0, 6.0])
    with pytest.raises(ValidationError):
        MarkerDataset(marker_name="m", sample=sample, class_labels=("a", "a", "b"))
    with pytest.raises(ValidationError):
        MarkerDataset(
            marker_name="m",
            sample=ThreeClassSample.from_arrays([1.0], [3.0, 4.0], [5.0, 6.0]),
            class_labels=("a", "b", "c"),
        )


def test_normality_report_consistency():
    entries = tuple(ClassNormality(label=label, n=20, w=0.95, p_value=p) for label, p in zip("abc", (0.2, 0.01, 0.5)))
    assert not NormalityReport(classes=entries, threshold=0.05, overall_normal=False).overall_normal
    with pytest.raises(ValidationError):
        NormalityReport(classes=entries, threshold=0.05, overall_normal=True)
