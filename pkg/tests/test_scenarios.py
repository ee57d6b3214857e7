"""
Tests for the scenario registry, published references and scenario files.
"""

import pytest

from trimarker.distributions import theoretical_ovl, theoretical_vus
from trimarker.errors import SpecParseError
from trimarker.models import BootstrapConfig, Method
from trimarker.scenarios import (
    BIAS_SCENARIOS,
    NULL_OVL,
    NULL_VUS,
    POWER_SCENARIOS,
    bias_reference,
    builtin_scenarios,
    format_scenario,
    get_scenario,
    is_all_normal,
    load_scenario_file,
    parametric_method,
    parse_scenarios,
    power_reference,
    power_statistics,
)

SCENARIO_TEXT = """
# two scenarios
id = shifted-gamma
title = Shifted gamma
f1 = gamma(2,1)
f2 = gamma(3,1)
f3 = mix(0.5*gamma(4,1)+0.5*normal(5,1))
ovl = 0.52
sizes = (20,20,20), (50,50,50)
reps = 40
B = 20
seed = 7

id = plain
f1 = normal(0,1)
f2 = normal(1,1)
f3 = normal(2,1)
"""


def test_registry_contents():
    registry = builtin_scenarios()
    assert len(registry) == 24
    assert list(registry)[:17] == list(POWER_SCENARIOS)
    assert list(registry)[17:] == list(BIAS_SCENARIOS)
    assert registry["tt1-3"].sizes == [(20, 20, 20), (50, 50, 50), (100, 100, 100)]
    assert registry["tt1-3"].specs == registry["gamma-shape"].specs


def test_get_scenario_unknown():
    with pytest.raises(SpecParseError, match="Unknown scenario"):
        get_scenario("no-such-scenario")


@pytest.mark.parametrize("scenario_id", list(POWER_SCENARIOS))
def test_theoretical_values_match_published(scenario_id):
    scenario = get_scenario(scenario_id)
    assert theoretical_ovl(*scenario.specs) == pytest.approx(scenario.theoretical_ovl, abs=0.002)
    assert theoretical_vus(*scenario.specs) == pytest.approx(scenario.theoretical_vus, abs=0.002)


def test_null_scenarios_have_null_values():
    for scenario_id, (_, f1, f2, f3, ovl, vus) in POWER_SCENARIOS.items():
        if scenario_id.endswith("-null"):
            assert f1 == f2 == f3
            assert (ovl, vus) == (NULL_OVL, NULL_VUS)


def test_parametric_method():
    assert is_all_normal(get_scenario("normal-scale"))
    assert parametric_method(get_scenario("normal-scale")) is Method.NORMAL
    assert parametric_method(get_scenario("mix-normal-location")) is Method.BOXCOX_NORMAL
    labels = [statistic.label for statistic in power_statistics(get_scenario("gamma-shape"))]
    assert labels == ["OVL_N^BC", "VUS_N^BC", "OVL_K", "VUS_K", "VUS_E"]


def test_reference_lookups():
    assert power_reference("normal-null", (20, 20, 20)) == (0.058, 0.055, 0.045, 0.055, 0.044)
    assert power_reference("normal-null", (21, 20, 20)) is None
    assert power_reference("made-up", (20, 20, 20)) is None
    assert bias_reference("tt1-1", "OVL_N", 100) == (-0.002, 0.053, 0.939)
    assert bias_reference("tt1-2", "OVL_N", 20) == (-0.076, 0.129, 0.738)
    assert bias_reference("tt1-1", "OVL_N", 30) is None
    assert bias_reference("tt1-1", "VUS_N", 20) is None


def test_every_power_scenario_has_reference_rows():
    for scenario_id in POWER_SCENARIOS:
        assert power_reference(scenario_id, (20, 20, 20)) is not None
        assert len(power_reference(scenario_id, (100, 100, 100))) == 5


# ============================================================================
# Scenario files
# ============================================================================


def test_parse_scenarios():
    first, second = parse_scenarios(SCENARIO_TEXT, BootstrapConfig(B=99, seed=1))
    assert first.id == "shifted-gamma"
    assert first.title == "Shifted gamma"
    assert first.theoretical_ovl == 0.52
    assert first.theoretical_vus is None
    assert first.sizes == [(20, 20, 20), (50, 50, 50)]
    assert (first.reps, first.boot.B, first.seed, first.boot.seed) == (40, 20, 7, 7)
    assert second.boot.B == 99
    assert second.reps == 1000
    assert len(second.sizes) == 8


def test_format_round_trip():
    for scenario in parse_scenarios(SCENARIO_TEXT):
        assert parse_scenarios(format_scenario(scenario)) == [scenario]


def test_load_scenario_file(tmp_path):
    path = tmp_path / "scenarios.txt"
    path.write_text(SCENARIO_TEXT, encoding="utf-8")
    assert [scenario.id for scenario in load_scenario_file(path)] == ["shifted-gamma", "plain"]


@pytest.mark.parametrize(
    "text,message",
    [
        ("", "no scenario blocks"),
        ("id = x\nf1 = normal(0,1)\nf2 = normal(0,1)", "lacks f3"),
        ("id = x\nf1 normal(0,1)", "line 2"),
        ("id = x\ncolour = red\nf1 = normal(0,1)", "line 2"),
        ("id = x\nf1 = normal(0,1)\nf2 = normal(0,1)\nf3 = normal(0,1)\nsizes = 20,20,20", "sizes"),
        ("id = x\nf1 = normal(0,1)\nf2 = normal(0,1)\nf3 = normal(0,1)\nreps = 0", "reps"),
        ("id = x\nf1 = normal(0,1)\nf2 = normal(0,1)\nf3 = normal(0,-1)", ""),
    ],
)
def test_parse_errors(text, message):
    with pytest.raises(SpecParseError, match=message):
        parse_scenarios(text)
