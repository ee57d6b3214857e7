"""
Built-in simulation scenarios, their published reference results, and the
scenario text-file format.

A scenario file holds one scenario per block; blocks are separated by blank
lines and ``#`` starts a comment::

    id = shifted-gamma
    f1 = gamma(2,1)
    f2 = gamma(3,1)
    f3 = mix(0.5*gamma(4,1)+0.5*normal(5,1))
    ovl = 0.52
    sizes = (20,20,20), (50,50,50)
    reps = 400
    B = 200
    seed = 7
"""

import logging
import re
from pathlib import Path
from typing import Optional

from pydantic import ValidationError

from .distributions import format_spec, parse_spec
from .errors import SpecParseError
from .models import (
    BootstrapConfig,
    Measure,
    Method,
    NormalSpec,
    ScenarioConfig,
    Statistic,
)

logger = logging.getLogger(__name__)

NULL_OVL = 1.0
NULL_VUS = 1.0 / 6.0

DESK_SIZES = [(20, 20, 20), (50, 50, 50), (100, 100, 100)]
BIAS_SIZES = [20, 50, 100]


# ============================================================================
# Registry
# ============================================================================

# id: (title, f1, f2, f3, OVL, VUS)
POWER_SCENARIOS: dict[str, tuple[str, str, str, str, float, float]] = {
    "normal-null": ("N(0,1) in all classes", "normal(0,1)", "normal(0,1)", "normal(0,1)", NULL_OVL, NULL_VUS),
    "normal-location": ("Normal location shift", "normal(0,1)", "normal(0.5,1)", "normal(1,1)", 0.6171, 0.3372),
    "normal-scale": ("Normal scale change", "normal(0,1)", "normal(0,1.5)", "normal(0,2)", 0.6773, 0.1668),
    "lognormal-null": (
        "LogN(0,1) in all classes", "lognormal(0,1)", "lognormal(0,1)", "lognormal(0,1)", NULL_OVL, NULL_VUS
    ),
    "lognormal-location": (
        "Log-normal location shift", "lognormal(0,1)", "lognormal(0,1)", "lognormal(1,1)", 0.6171, 0.3169
    ),
    "lognormal-scale": (
        "Log-normal scale change", "lognormal(1,0.5)", "lognormal(1,1)", "lognormal(1,1.5)", 0.5157, 0.1674
    ),
    "gamma-null": ("Gamma(1,1) in all classes", "gamma(1,1)", "gamma(1,1)", "gamma(1,1)", NULL_OVL, NULL_VUS),
    "gamma-shape": ("Gamma shape change", "gamma(2,1)", "gamma(3,1)", "gamma(4,1)", 0.5295, 0.3888),
    "gamma-shape-scale": (
        "Gamma shape and scale change", "gamma(0.2,0.6)", "gamma(0.2,0.7)", "gamma(0.5,0.5)", 0.6138, 0.3056
    ),
    "cross-family": ("Normal, gamma, log-normal", "normal(0,1)", "gamma(2,1)", "lognormal(0,1)", 0.3959, 0.2943),
    "mix-normal-null": (
        "Normal mixture in all classes",
        "mix(0.5*normal(0,1)+0.5*normal(3,1))",
        "mix(0.5*normal(0,1)+0.5*normal(3,1))",
        "mix(0.5*normal(0,1)+0.5*normal(3,1))",
        NULL_OVL,
        NULL_VUS,
    ),
    "mix-normal-location": (
        "Normal mixtures, location and scale shift",
        "mix(0.5*normal(0,1)+0.5*normal(3,1))",
        "mix(0.5*normal(1,1)+0.5*normal(4,1.5))",
        "mix(0.5*normal(2,1)+0.5*normal(5,2))",
        0.5807,
        0.3208,
    ),
    "mix-normal-scale": (
        "Normal mixtures, scale change",
        "mix(0.5*normal(0,1)+0.5*normal(1,0.5))",
        "mix(0.5*normal(0,1.5)+0.5*normal(1,1))",
        "mix(0.5*normal(0,2)+0.5*normal(1,1.5))",
        0.6784,
        0.1720,
    ),
    "mix-gamma-null": (
        "Gamma mixture in all classes",
        "mix(0.5*gamma(1,1)+0.5*gamma(4,1))",
        "mix(0.5*gamma(1,1)+0.5*gamma(4,1))",
        "mix(0.5*gamma(1,1)+0.5*gamma(4,1))",
        NULL_OVL,
        NULL_VUS,
    ),
    "mix-gamma": (
        "Gamma mixtures",
        "mix(0.5*gamma(1,1)+0.5*gamma(4,1))",
        "mix(0.5*gamma(2,1)+0.5*gamma(5,2/3))",
        "mix(0.5*gamma(3,1)+0.5*gamma(6,1/2))",
        0.6609,
        0.2583,
    ),
    "mix-normal-gamma-null": (
        "Normal-gamma mixture in all classes",
        "mix(0.5*normal(0,1)+0.5*gamma(4,1))",
        "mix(0.5*normal(0,1)+0.5*gamma(4,1))",
        "mix(0.5*normal(0,1)+0.5*gamma(4,1))",
        NULL_OVL,
        NULL_VUS,
    ),
    "mix-normal-gamma": (
        "Normal-gamma mixtures",
        "mix(0.5*normal(0,1)+0.5*gamma(4,1))",
        "mix(0.5*normal(1,1)+0.5*gamma(5,2/3))",
        "mix(0.5*normal(2,1)+0.5*gamma(6,1/2))",
        0.5450,
        0.2580,
    ),
}

# Bias-study scenario id -> power scenario with the same three distributions
BIAS_SCENARIOS: dict[str, str] = {
    "tt1-1": "normal-location",
    "tt1-2": "lognormal-location",
    "tt1-3": "gamma-shape",
    "tt1-4": "cross-family",
    "tt1-5": "mix-normal-location",
    "tt1-6": "mix-gamma",
    "tt1-7": "mix-normal-gamma",
}


def _scenario(scenario_id: str, source_id: str, **overrides) -> ScenarioConfig:
    title, f1, f2, f3, ovl, vus = POWER_SCENARIOS[source_id]
    return ScenarioConfig(
        id=scenario_id,
        title=title,
        f1=parse_spec(f1),
        f2=parse_spec(f2),
        f3=parse_spec(f3),
        theoretical_ovl=ovl,
        theoretical_vus=vus,
        **overrides,
    )


def builtin_scenarios() -> dict[str, ScenarioConfig]:
    """The 17 power scenarios followed by the 7 bias-study scenarios, keyed by id."""
    registry = {scenario_id: _scenario(scenario_id, scenario_id) for scenario_id in POWER_SCENARIOS}
    for bias_id, source_id in BIAS_SCENARIOS.items():
        registry[bias_id] = _scenario(bias_id, source_id, sizes=[(n, n, n) for n in BIAS_SIZES])
    return registry


def get_scenario(scenario_id: str) -> ScenarioConfig:
    registry = builtin_scenarios()
    if scenario_id not in registry:
        raise SpecParseError(f"Unknown scenario '{scenario_id}'. Built-in scenarios: {', '.join(registry)}")
    return registry[scenario_id]


def is_all_normal(scenario: ScenarioConfig) -> bool:
    return all(isinstance(spec, NormalSpec) for spec in scenario.specs)


def parametric_method(scenario: ScenarioConfig) -> Method:
    """NORMAL when every class is normal, BOXCOX_NORMAL otherwise."""
    return Method.NORMAL if is_all_normal(scenario) else Method.BOXCOX_NORMAL


def power_statistics(scenario: ScenarioConfig) -> list[Statistic]:
    """The five compared statistics, in table column order."""
    parametric = parametric_method(scenario)
    return [
        Statistic(measure=Measure.OVL, method=parametric),
        Statistic(measure=Measure.VUS, method=parametric),
        Statistic(measure=Measure.OVL, method=Method.KERNEL),
        Statistic(measure=Measure.VUS, method=Method.KERNEL),
        Statistic(measure=Measure.VUS, method=Method.EMPIRICAL),
    ]


# ============================================================================
# Published reference results
# ============================================================================

# Rejection proportions per size triple, columns in power_statistics() order
POWER_REFERENCE: dict[str, dict[tuple[int, int, int], tuple[float, ...]]] = {
    "normal-null": {
        (20, 20, 20): (0.058, 0.055, 0.045, 0.055, 0.044),
        (20, 20, 30): (0.056, 0.046, 0.042, 0.052, 0.055),
        (20, 30, 50): (0.037, 0.049, 0.028, 0.053, 0.049),
        (30, 50, 50): (0.049, 0.043, 0.045, 0.047, 0.049),
        (50, 50, 50): (0.052, 0.036, 0.045, 0.037, 0.036),
        (50, 50, 100): (0.045, 0.057, 0.032, 0.053, 0.057),
        (50, 100, 100): (0.058, 0.054, 0.049, 0.052, 0.053),
        (100, 100, 100): (0.049, 0.046, 0.037, 0.050, 0.050),
    },
    "normal-location": {
        (20, 20, 20): (0.724, 0.890, 0.472, 0.874, 0.861),
        (20, 20, 30): (0.779, 0.922, 0.504, 0.901, 0.895),
        (20, 30, 50): (0.872, 0.973, 0.644, 0.960, 0.953),
        (30, 50, 50): (0.965, 0.991, 0.840, 0.988, 0.986),
        (50, 50, 50): (0.995, 0.999, 0.937, 0.997, 0.996),
        (50, 50, 100): (0.997, 1.000, 0.978, 1.000, 1.000),
        (50, 100, 100): (0.998, 1.000, 0.987, 1.000, 0.999),
        (100, 100, 100): (1.000, 1.000, 1.000, 1.000, 1.000),
    },
    "normal-scale": {
        (20, 20, 20): (0.469, 0.058, 0.315, 0.053, 0.057),
        (20, 20, 30): (0.547, 0.040, 0.375, 0.051, 0.050),
        (20, 30, 50): (0.727, 0.040, 0.512, 0.039, 0.045),
        (30, 50, 50): (0.902, 0.031, 0.727, 0.035, 0.036),
        (50, 50, 50): (0.959, 0.034, 0.844, 0.034, 0.039),
        (50, 50, 100): (0.994, 0.042, 0.939, 0.048, 0.047),
        (50, 100, 100): (0.996, 0.047, 0.969, 0.045, 0.046),
        (100, 100, 100): (0.999, 0.041, 0.996, 0.045, 0.048),
    },
    "lognormal-null": {
        (20, 20, 20): (0.070, 0.054, 0.032, 0.058, 0.044),
        (20, 20, 30): (0.053, 0.045, 0.039, 0.050, 0.055),
        (20, 30, 50): (0.040, 0.049, 0.028, 0.052, 0.049),
        (30, 50, 50): (0.052, 0.040, 0.045, 0.043, 0.049),
        (50, 50, 50): (0.047, 0.035, 0.035, 0.043, 0.036),
        (50, 50, 100): (0.044, 0.054, 0.036, 0.054, 0.057),
        (50, 100, 100): (0.061, 0.053, 0.047, 0.051, 0.053),
        (100, 100, 100): (0.052, 0.044, 0.045, 0.054, 0.050),
    },
    "lognormal-location": {
        (20, 20, 20): (0.837, 0.836, 0.612, 0.846, 0.795),
        (20, 20, 30): (0.901, 0.856, 0.650, 0.886, 0.811),
        (20, 30, 50): (0.975, 0.922, 0.766, 0.956, 0.893),
        (30, 50, 50): (0.994, 0.964, 0.944, 0.985, 0.958),
        (50, 50, 50): (1.000, 0.995, 0.981, 0.996, 0.987),
        (50, 50, 100): (1.000, 0.998, 0.996, 1.000, 0.994),
        (50, 100, 100): (1.000, 0.997, 0.999, 0.999, 0.997),
        (100, 100, 100): (1.000, 1.000, 1.000, 1.000, 1.000),
    },
    "lognormal-scale": {
        (20, 20, 20): (0.938, 0.057, 0.401, 0.188, 0.069),
        (20, 20, 30): (0.978, 0.043, 0.334, 0.198, 0.051),
        (20, 30, 50): (0.992, 0.037, 0.332, 0.200, 0.043),
        (30, 50, 50): (1.000, 0.035, 0.728, 0.225, 0.036),
        (50, 50, 50): (1.000, 0.035, 0.928, 0.226, 0.053),
        (50, 50, 100): (1.000, 0.042, 0.932, 0.275, 0.050),
        (50, 100, 100): (1.000, 0.040, 0.979, 0.275, 0.046),
        (100, 100, 100): (1.000, 0.048, 1.000, 0.276, 0.054),
    },
    "gamma-null": {
        (20, 20, 20): (0.055, 0.059, 0.033, 0.055, 0.046),
        (20, 20, 30): (0.063, 0.069, 0.039, 0.063, 0.064),
        (20, 30, 50): (0.054, 0.047, 0.045, 0.048, 0.048),
        (30, 50, 50): (0.064, 0.049, 0.041, 0.047, 0.050),
        (50, 50, 50): (0.045, 0.047, 0.027, 0.048, 0.046),
        (50, 50, 100): (0.055, 0.054, 0.042, 0.055, 0.057),
        (50, 100, 100): (0.064, 0.049, 0.055, 0.052, 0.051),
        (100, 100, 100): (0.058, 0.071, 0.048, 0.063, 0.069),
    },
    "gamma-shape": {
        (20, 20, 20): (0.910, 0.980, 0.672, 0.959, 0.967),
        (20, 20, 30): (0.946, 0.990, 0.749, 0.978, 0.978),
        (20, 30, 50): (0.978, 0.996, 0.871, 0.993, 0.992),
        (30, 50, 50): (0.999, 1.000, 0.963, 1.000, 1.000),
        (50, 50, 50): (1.000, 1.000, 0.996, 1.000, 1.000),
        (50, 50, 100): (1.000, 1.000, 1.000, 1.000, 1.000),
        (50, 100, 100): (1.000, 1.000, 0.999, 1.000, 1.000),
        (100, 100, 100): (1.000, 1.000, 1.000, 1.000, 1.000),
    },
    "gamma-shape-scale": {
        (20, 20, 20): (0.741, 0.646, 0.244, 0.457, 0.550),
        (20, 20, 30): (0.821, 0.741, 0.388, 0.512, 0.635),
        (20, 30, 50): (0.896, 0.786, 0.527, 0.597, 0.685),
        (30, 50, 50): (0.980, 0.873, 0.590, 0.732, 0.809),
        (50, 50, 50): (0.995, 0.948, 0.643, 0.816, 0.885),
        (50, 50, 100): (1.000, 0.964, 0.839, 0.905, 0.922),
        (50, 100, 100): (1.000, 0.982, 0.901, 0.941, 0.967),
        (100, 100, 100): (1.000, 1.000, 0.944, 0.986, 0.996),
    },
    "cross-family": {
        (20, 20, 20): (0.998, 0.745, 0.874, 0.698, 0.674),
        (20, 20, 30): (0.999, 0.779, 0.892, 0.751, 0.714),
        (20, 30, 50): (1.000, 0.865, 0.948, 0.859, 0.831),
        (30, 50, 50): (1.000, 0.935, 0.999, 0.920, 0.903),
        (50, 50, 50): (1.000, 0.973, 1.000, 0.958, 0.947),
        (50, 50, 100): (1.000, 0.992, 1.000, 0.989, 0.982),
        (50, 100, 100): (1.000, 0.994, 1.000, 0.989, 0.989),
        (100, 100, 100): (1.000, 1.000, 1.000, 0.998, 0.997),
    },
    "mix-normal-null": {
        (20, 20, 20): (0.051, 0.045, 0.036, 0.053, 0.053),
        (20, 20, 30): (0.043, 0.052, 0.034, 0.052, 0.049),
        (20, 30, 50): (0.051, 0.048, 0.035, 0.050, 0.044),
        (30, 50, 50): (0.038, 0.054, 0.030, 0.052, 0.046),
        (50, 50, 50): (0.060, 0.057, 0.033, 0.054, 0.050),
        (50, 50, 100): (0.050, 0.051, 0.043, 0.049, 0.048),
        (50, 100, 100): (0.057, 0.054, 0.055, 0.051, 0.045),
        (100, 100, 100): (0.038, 0.037, 0.042, 0.035, 0.036),
    },
    "mix-normal-location": {
        (20, 20, 20): (0.750, 0.918, 0.262, 0.836, 0.833),
        (20, 20, 30): (0.778, 0.943, 0.305, 0.857, 0.863),
        (20, 30, 50): (0.888, 0.971, 0.475, 0.920, 0.912),
        (30, 50, 50): (0.971, 0.998, 0.747, 0.976, 0.975),
        (50, 50, 50): (0.995, 1.000, 0.890, 0.994, 0.993),
        (50, 50, 100): (1.000, 1.000, 0.962, 1.000, 1.000),
        (50, 100, 100): (1.000, 1.000, 0.993, 1.000, 0.999),
        (100, 100, 100): (1.000, 1.000, 1.000, 1.000, 1.000),
    },
    "mix-normal-scale": {
        (20, 20, 20): (0.433, 0.068, 0.318, 0.056, 0.061),
        (20, 20, 30): (0.524, 0.070, 0.356, 0.052, 0.068),
        (20, 30, 50): (0.656, 0.053, 0.494, 0.045, 0.047),
        (30, 50, 50): (0.885, 0.075, 0.734, 0.061, 0.063),
        (50, 50, 50): (0.940, 0.105, 0.834, 0.070, 0.074),
        (50, 50, 100): (0.986, 0.071, 0.911, 0.054, 0.056),
        (50, 100, 100): (0.994, 0.083, 0.958, 0.061, 0.061),
        (100, 100, 100): (1.000, 0.117, 0.999, 0.079, 0.078),
    },
    "mix-gamma-null": {
        (20, 20, 20): (0.059, 0.050, 0.033, 0.043, 0.053),
        (20, 20, 30): (0.045, 0.050, 0.034, 0.055, 0.059),
        (20, 30, 50): (0.047, 0.055, 0.037, 0.054, 0.058),
        (30, 50, 50): (0.042, 0.045, 0.037, 0.046, 0.048),
        (50, 50, 50): (0.059, 0.061, 0.038, 0.052, 0.052),
        (50, 50, 100): (0.044, 0.040, 0.032, 0.045, 0.044),
        (50, 100, 100): (0.058, 0.056, 0.059, 0.054, 0.053),
        (100, 100, 100): (0.056, 0.064, 0.047, 0.060, 0.063),
    },
    "mix-gamma": {
        (20, 20, 20): (0.619, 0.583, 0.238, 0.407, 0.491),
        (20, 20, 30): (0.640, 0.614, 0.313, 0.439, 0.531),
        (20, 30, 50): (0.771, 0.704, 0.464, 0.533, 0.621),
        (30, 50, 50): (0.915, 0.780, 0.652, 0.609, 0.725),
        (50, 50, 50): (0.973, 0.864, 0.784, 0.712, 0.799),
        (50, 50, 100): (0.988, 0.904, 0.879, 0.778, 0.868),
        (50, 100, 100): (0.999, 0.940, 0.959, 0.833, 0.892),
        (100, 100, 100): (1.000, 0.986, 0.994, 0.947, 0.969),
    },
    "mix-normal-gamma-null": {
        (20, 20, 20): (0.059, 0.058, 0.039, 0.057, 0.053),
        (20, 20, 30): (0.039, 0.053, 0.035, 0.049, 0.048),
        (20, 30, 50): (0.045, 0.047, 0.036, 0.050, 0.049),
        (30, 50, 50): (0.049, 0.058, 0.042, 0.061, 0.065),
        (50, 50, 50): (0.048, 0.054, 0.032, 0.058, 0.053),
        (50, 50, 100): (0.051, 0.048, 0.035, 0.047, 0.048),
        (50, 100, 100): (0.050, 0.053, 0.038, 0.056, 0.057),
        (100, 100, 100): (0.047, 0.052, 0.035, 0.053, 0.054),
    },
    "mix-normal-gamma": {
        (20, 20, 20): (0.786, 0.463, 0.647, 0.398, 0.457),
        (20, 20, 30): (0.862, 0.519, 0.757, 0.449, 0.524),
        (20, 30, 50): (0.943, 0.598, 0.892, 0.541, 0.616),
        (30, 50, 50): (0.993, 0.680, 0.987, 0.613, 0.692),
        (50, 50, 50): (1.000, 0.755, 0.993, 0.724, 0.783),
        (50, 50, 100): (1.000, 0.811, 0.999, 0.775, 0.847),
        (50, 100, 100): (1.000, 0.879, 1.000, 0.859, 0.895),
        (100, 100, 100): (1.000, 0.946, 1.000, 0.938, 0.960),
    },
}

# Bias, RMSE and 95% coverage at n = 20, 50, 100 for OVL_N and OVL_K
BIAS_REFERENCE: dict[str, dict[str, tuple[tuple[float, float, float], ...]]] = {
    "tt1-1": {
        "OVL_N": ((-0.029, 0.107, 0.871), (-0.005, 0.072, 0.930), (-0.002, 0.053, 0.939)),
        "OVL_K": ((-0.031, 0.099, 0.842), (0.008, 0.068, 0.944), (0.015, 0.055, 0.955)),
    },
    "tt1-2": {
        "OVL_N": ((-0.076, 0.129, 0.738), (-0.039, 0.076, 0.808), (-0.027, 0.054, 0.857)),
        "OVL_K": ((-0.065, 0.116, 0.737), (-0.025, 0.070, 0.848), (-0.015, 0.051, 0.883)),
    },
    "tt1-3": {
        "OVL_N": ((-0.026, 0.111, 0.883), (-0.016, 0.074, 0.915), (-0.008, 0.049, 0.931)),
        "OVL_K": ((-0.003, 0.100, 0.919), (0.016, 0.074, 0.965), (0.022, 0.054, 0.950)),
    },
    "tt1-4": {
        "OVL_N": ((-0.037, 0.083, 0.857), (-0.021, 0.051, 0.864), (-0.014, 0.037, 0.878)),
        "OVL_K": ((0.018, 0.088, 0.883), (0.029, 0.062, 0.944), (0.028, 0.050, 0.920)),
    },
    "tt1-5": {
        "OVL_N": ((0.007, 0.102, 0.935), (0.022, 0.070, 0.945), (0.028, 0.055, 0.899)),
        "OVL_K": ((0.039, 0.094, 0.966), (0.072, 0.091, 0.934), (0.078, 0.088, 0.688)),
    },
    "tt1-6": {
        "OVL_N": ((-0.043, 0.110, 0.820), (-0.010, 0.067, 0.901), (-0.000, 0.048, 0.918)),
        "OVL_K": ((-0.072, 0.118, 0.665), (-0.028, 0.070, 0.801), (-0.017, 0.053, 0.883)),
    },
    "tt1-7": {
        "OVL_N": ((0.009, 0.093, 0.908), (0.037, 0.072, 0.913), (0.049, 0.066, 0.813)),
        "OVL_K": ((-0.033, 0.095, 0.828), (-0.001, 0.060, 0.916), (0.008, 0.044, 0.938)),
    },
}


def power_reference(scenario_id: str, sizes: tuple[int, int, int]) -> Optional[tuple[float, ...]]:
    return POWER_REFERENCE.get(scenario_id, {}).get(tuple(sizes))


def bias_reference(scenario_id: str, estimator: str, n: int) -> Optional[tuple[float, float, float]]:
    cells = BIAS_REFERENCE.get(scenario_id, {}).get(estimator)
    if cells is None or n not in BIAS_SIZES:
        return None
    return cells[BIAS_SIZES.index(n)]


# ============================================================================
# Scenario files
# ============================================================================

_SIZE_TRIPLE = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")
_KEYS = {"id", "title", "f1", "f2", "f3", "ovl", "vus", "sizes", "reps", "b", "seed"}


def _parse_block(lines: list[tuple[int, str]], defaults: BootstrapConfig) -> ScenarioConfig:
    fields: dict[str, str] = {}
    for number, line in lines:
        key, equals, value = line.partition("=")
        key = key.strip().lower()
        if not equals or key not in _KEYS:
            raise SpecParseError(f"line {number}: expected '<key> = <value>' with key in {sorted(_KEYS)}")
        fields[key] = value.strip()

    missing = [key for key in ("id", "f1", "f2", "f3") if key not in fields]
    if missing:
        raise SpecParseError(f"scenario block at line {lines[0][0]} lacks {', '.join(missing)}")

    data: dict = {"id": fields["id"], "title": fields.get("title", "")}
    for key in ("f1", "f2", "f3"):
        data[key] = parse_spec(fields[key])
    if "ovl" in fields:
        data["theoretical_ovl"] = fields["ovl"]
    if "vus" in fields:
        data["theoretical_vus"] = fields["vus"]
    if "sizes" in fields:
        data["sizes"] = [tuple(int(n) for n in triple) for triple in _SIZE_TRIPLE.findall(fields["sizes"])]
        if not data["sizes"]:
            raise SpecParseError(f"scenario '{fields['id']}': sizes must look like (20,20,20), (50,50,50)")
    if "reps" in fields:
        data["reps"] = fields["reps"]
    boot = defaults.model_dump()
    if "b" in fields:
        boot["B"] = fields["b"]
    if "seed" in fields:
        data["seed"] = fields["seed"]
        boot["seed"] = fields["seed"]
    data["boot"] = boot

    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        error = exc.errors()[0]
        location = ".".join(str(part) for part in error["loc"])
        raise SpecParseError(f"scenario '{fields['id']}': {location}: {error['msg']}") from exc


def parse_scenarios(text: str, defaults: Optional[BootstrapConfig] = None) -> list[ScenarioConfig]:
    """Parse every scenario block in ``text``."""
    defaults = defaults or BootstrapConfig()
    blocks: list[list[tuple[int, str]]] = [[]]
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            blocks[-1].append((number, line))
        elif blocks[-1]:
            blocks.append([])
    scenarios = [_parse_block(block, defaults) for block in blocks if block]
    if not scenarios:
        raise SpecParseError("no scenario blocks found")
    return scenarios


def load_scenario_file(path: Path, defaults: Optional[BootstrapConfig] = None) -> list[ScenarioConfig]:
    logger.debug("Reading scenarios from %s", path)
    return parse_scenarios(Path(path).read_text(encoding="utf-8"), defaults)


def format_scenario(scenario: ScenarioConfig) -> str:
    """Scenario block in the file format; ``parse_scenarios`` reads it back."""
    lines = [f"id = {scenario.id}"]
    if scenario.title:
        lines.append(f"title = {scenario.title}")
    for key, spec in zip(("f1", "f2", "f3"), scenario.specs):
        lines.append(f"{key} = {format_spec(spec)}")
    if scenario.theoretical_ovl is not None:
        lines.append(f"ovl = {scenario.theoretical_ovl!r}")
    if scenario.theoretical_vus is not None:
        lines.append(f"vus = {scenario.theoretical_vus!r}")
    lines.append("sizes = " + ", ".join(f"({n1},{n2},{n3})" for n1, n2, n3 in scenario.sizes))
    lines.append(f"reps = {scenario.reps}")
    lines.append(f"B = {scenario.boot.B}")
    lines.append(f"seed = {scenario.seed}")
    return "\n".join(lines) + "\n"
