"""
Pydantic models for trimarker.

This module defines the domain types shared by every layer: distribution
specifications, three-class samples and fits, estimates, bootstrap settings,
simulation scenarios and their result rows, and marker reports.
"""

from enum import Enum
from typing import Annotated, Literal, Optional, Union

import numpy as np
from scipy import special
from pydantic import (
    AfterValidator,
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    field_validator,
    model_validator,
)

from .config import settings


# ============================================================================
# Helper functions
# ============================================================================


def as_finite_vector(value) -> np.ndarray:
    """Convert to a read-only, non-empty, one-dimensional float64 array of finite values."""
    array = np.array(value, dtype=float)
    if array.ndim != 1 or array.size == 0:
        raise ValueError("must be a non-empty one-dimensional vector")
    if not np.all(np.isfinite(array)):
        raise ValueError("all values must be finite")
    array.flags.writeable = False
    return array


def strip_whitespace(value: str) -> str:
    """Strip leading and trailing whitespace."""
    return value.strip()


def validate_identifier(value: str) -> str:
    """Validate a scenario or marker id: non-empty, no whitespace."""
    if not value or any(char.isspace() for char in value):
        raise ValueError("identifier must be non-empty and contain no whitespace")
    return value


def validate_size_triple(value: tuple[int, int, int]) -> tuple[int, int, int]:
    """Validate that every class size is at least 2."""
    if min(value) < 2:
        raise ValueError(f"class sizes must be at least 2, got {value}")
    return value


# ============================================================================
# Reusable field types
# ============================================================================

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]

PositiveFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]

Probability = Annotated[float, Field(ge=0, le=1)]

OpenProbability = Annotated[float, Field(gt=0, lt=1)]

SeedField = Annotated[int, Field(default_factory=lambda: settings.seed, ge=0, lt=2**64, description="Random seed")]

FiniteVector = Annotated[
    np.ndarray,
    BeforeValidator(as_finite_vector),
    PlainSerializer(lambda array: array.tolist(), return_type=list[float]),
]

SizeTriple = Annotated[tuple[int, int, int], AfterValidator(validate_size_triple)]

IdentifierField = Annotated[str, BeforeValidator(strip_whitespace), AfterValidator(validate_identifier)]

DEFAULT_SIZES: list[tuple[int, int, int]] = [
    (20, 20, 20),
    (20, 20, 30),
    (20, 30, 50),
    (30, 50, 50),
    (50, 50, 50),
    (50, 50, 100),
    (50, 100, 100),
    (100, 100, 100),
]


# ============================================================================
# Numerics
# ============================================================================


class Interval(BaseModel):
    """Closed finite interval used as an integration or search domain."""

    model_config = ConfigDict(frozen=True)

    lo: FiniteFloat
    hi: FiniteFloat

    @model_validator(mode="after")
    def check_order(self) -> "Interval":
        if not self.lo < self.hi:
            raise ValueError(f"interval requires lo < hi, got [{self.lo}, {self.hi}]")
        return self

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


class SampleStats(BaseModel):
    """Summary statistics of one vector; IQR uses type-7 quantiles."""

    model_config = ConfigDict(frozen=True)

    n: Annotated[int, Field(ge=2)]
    mean: FiniteFloat
    sd_mle: Annotated[float, Field(ge=0, description="Standard deviation with divisor n")]
    sd_sample: Annotated[float, Field(ge=0, description="Standard deviation with divisor n-1")]
    iqr: Annotated[float, Field(ge=0, description="Interquartile range")]
    min: FiniteFloat
    max: FiniteFloat


# ============================================================================
# Distribution specifications
# ============================================================================


class NormalSpec(BaseModel):
    """Normal distribution with mean ``mu`` and standard deviation ``sigma``."""

    model_config = ConfigDict(frozen=True)

    family: Literal["normal"] = "normal"
    mu: FiniteFloat
    sigma: PositiveFloat


class LogNormalSpec(BaseModel):
    """Log-normal distribution; ``mu`` and ``sigma`` are the mean and sd of log(X)."""

    model_config = ConfigDict(frozen=True)

    family: Literal["lognormal"] = "lognormal"
    mu: FiniteFloat
    sigma: PositiveFloat


class GammaSpec(BaseModel):
    """Gamma distribution with ``shape`` and ``scale`` (mean = shape * scale)."""

    model_config = ConfigDict(frozen=True)

    family: Literal["gamma"] = "gamma"
    shape: PositiveFloat
    scale: PositiveFloat


ComponentSpec = Annotated[Union[NormalSpec, LogNormalSpec, GammaSpec], Field(discriminator="family")]


class MixtureSpec(BaseModel):
    """Finite mixture of non-mixture components."""

    model_config = ConfigDict(frozen=True)

    family: Literal["mixture"] = "mixture"
    weights: tuple[Probability, ...]
    components: tuple[ComponentSpec, ...]

    @model_validator(mode="after")
    def check_weights(self) -> "MixtureSpec":
        if not self.components:
            raise ValueError("a mixture needs at least one component")
        if len(self.weights) != len(self.components):
            raise ValueError("a mixture needs exactly one weight per component")
        if abs(sum(self.weights) - 1.0) > 1e-12:
            raise ValueError(f"mixture weights must sum to 1, got {sum(self.weights)!r}")
        return self


DistributionSpec = Annotated[
    Union[NormalSpec, LogNormalSpec, GammaSpec, MixtureSpec],
    Field(discriminator="family"),
]


class DecisionRule(BaseModel):
    """Two thresholds c1 < c2 assigning a marker value to class 1, 2 or 3."""

    model_config = ConfigDict(frozen=True)

    c1: float
    c2: float

    @model_validator(mode="after")
    def check_order(self) -> "DecisionRule":
        if not self.c1 < self.c2:
            raise ValueError(f"decision rule requires c1 < c2, got ({self.c1}, {self.c2})")
        return self


class OperatingPoint(BaseModel):
    """True positive fractions of the three classes under a decision rule."""

    model_config = ConfigDict(frozen=True)

    tpf1: Probability
    tpf2: Probability
    tpf3: Probability


# ============================================================================
# Samples and fits
# ============================================================================


class ThreeClassSample(BaseModel):
    """Marker measurements of the three ordered classes."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    class1: FiniteVector
    class2: FiniteVector
    class3: FiniteVector

    @classmethod
    def from_arrays(cls, class1, class2, class3) -> "ThreeClassSample":
        return cls(class1=class1, class2=class2, class3=class3)

    @property
    def classes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.class1, self.class2, self.class3)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return (self.class1.size, self.class2.size, self.class3.size)

    def pooled(self) -> np.ndarray:
        return np.concatenate(self.classes)

    def map(self, transform) -> "ThreeClassSample":
        """Apply an elementwise transform to every class."""
        return ThreeClassSample.from_arrays(*(transform(values) for values in self.classes))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ThreeClassSample):
            return NotImplemented
        return all(np.array_equal(mine, theirs) for mine, theirs in zip(self.classes, other.classes))

    __hash__ = None


class NormalTriple(BaseModel):
    """Per-class normal MLE fit and the derived trinormal coefficients."""

    model_config = ConfigDict(frozen=True)

    mu: tuple[FiniteFloat, FiniteFloat, FiniteFloat]
    sigma: tuple[PositiveFloat, PositiveFloat, PositiveFloat]

    @property
    def a(self) -> float:
        return self.sigma[1] / self.sigma[0]

    @property
    def b(self) -> float:
        return (self.mu[0] - self.mu[1]) / self.sigma[0]

    @property
    def c(self) -> float:
        return self.sigma[1] / self.sigma[2]

    @property
    def d(self) -> float:
        return (self.mu[2] - self.mu[1]) / self.sigma[2]


class BoxCoxFit(BaseModel):
    """Common Box-Cox parameter fitted by the three-group profile likelihood."""

    model_config = ConfigDict(frozen=True)

    lam: Annotated[FiniteFloat, Field(description="Fitted transformation parameter lambda")]
    shift: Annotated[float, Field(ge=0, description="Offset added to every value before transforming")] = 0.0
    loglik: Annotated[FiniteFloat, Field(description="Profile log-likelihood at lambda")]
    search_domain: Interval
    at_boundary: Annotated[bool, Field(description="Lambda landed on an edge of the search domain")] = False

    @model_validator(mode="after")
    def check_domain(self) -> "BoxCoxFit":
        if not self.search_domain.contains(self.lam):
            raise ValueError(f"lambda {self.lam} outside search domain")
        return self


class KernelClass(BaseModel):
    """Gaussian kernel smoother of one class."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    data: FiniteVector
    bandwidth: PositiveFloat

    def pdf(self, x):
        """Kernel density estimate at x (scalar or array)."""
        z = (np.asarray(x, dtype=float)[..., None] - self.data) / self.bandwidth
        return np.exp(-0.5 * z * z).sum(axis=-1) / (self.data.size * self.bandwidth * np.sqrt(2.0 * np.pi))

    def cdf(self, x):
        """Kernel distribution estimate at x (scalar or array)."""
        z = (np.asarray(x, dtype=float)[..., None] - self.data) / self.bandwidth
        return special.ndtr(z).mean(axis=-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KernelClass):
            return NotImplemented
        return self.bandwidth == other.bandwidth and np.array_equal(self.data, other.data)

    __hash__ = None


class KernelEstimator(BaseModel):
    """Kernel smoothers of the three classes."""

    model_config = ConfigDict(frozen=True)

    classes: tuple[KernelClass, KernelClass, KernelClass]

    @property
    def bandwidths(self) -> tuple[float, float, float]:
        return tuple(kernel.bandwidth for kernel in self.classes)

    def support(self, margin: float) -> Interval:
        """Pooled data range extended by ``margin`` times the largest bandwidth."""
        pad = margin * max(self.bandwidths)
        lo = min(float(kernel.data.min()) for kernel in self.classes)
        hi = max(float(kernel.data.max()) for kernel in self.classes)
        return Interval(lo=lo - pad, hi=hi + pad)


# ============================================================================
# Estimates
# ============================================================================


class Measure(str, Enum):
    OVL = "OVL"
    VUS = "VUS"


class Method(str, Enum):
    NORMAL = "NORMAL"
    BOXCOX_NORMAL = "BOXCOX_NORMAL"
    KERNEL = "KERNEL"
    EMPIRICAL = "EMPIRICAL"


METHOD_SUFFIXES = {
    Method.NORMAL: "N",
    Method.BOXCOX_NORMAL: "N^BC",
    Method.KERNEL: "K",
    Method.EMPIRICAL: "E",
}


def statistic_label(measure: Measure, method: Method) -> str:
    """Display label such as ``OVL_N^BC`` or ``VUS_E``."""
    return f"{Measure(measure).value}_{METHOD_SUFFIXES[Method(method)]}"


class Statistic(BaseModel):
    """A (measure, method) pair."""

    model_config = ConfigDict(frozen=True)

    measure: Measure
    method: Method

    @property
    def label(self) -> str:
        return statistic_label(self.measure, self.method)

    @classmethod
    def from_label(cls, label: str) -> "Statistic":
        measure, _, suffix = label.strip().upper().partition("_")
        methods = {value.upper(): key for key, value in METHOD_SUFFIXES.items()}
        if measure not in Measure.__members__ or suffix not in methods:
            raise ValueError(f"unknown statistic label '{label}'")
        return cls(measure=Measure(measure), method=methods[suffix])

    def __str__(self) -> str:
        return self.label


class ConfidenceInterval(BaseModel):
    """Percentile bootstrap interval."""

    model_config = ConfigDict(frozen=True)

    lo: FiniteFloat
    hi: FiniteFloat
    level: OpenProbability
    B: Annotated[int, Field(ge=2)]
    redraws: Annotated[int, Field(ge=0, description="Resamples redrawn after an estimator failure")] = 0

    @model_validator(mode="after")
    def check_order(self) -> "ConfidenceInterval":
        if self.lo > self.hi:
            raise ValueError(f"interval requires lo <= hi, got ({self.lo}, {self.hi})")
        return self


class EstimateResult(BaseModel):
    """Point estimate of OVL or VUS, optionally with a percentile interval."""

    model_config = ConfigDict(frozen=True)

    measure: Measure
    method: Method
    value: Probability
    ci: Optional[ConfidenceInterval] = None
    band: Annotated[Optional[str], Field(description="OVL interpretation band")] = None

    @property
    def label(self) -> str:
        return statistic_label(self.measure, self.method)


# ============================================================================
# Inference
# ============================================================================


class BootstrapConfig(BaseModel):
    """Resample count, interval level, test size and seed."""

    model_config = ConfigDict(frozen=True)

    B: Annotated[int, Field(default=500, ge=2, description="Bootstrap resamples")]
    level: Annotated[OpenProbability, Field(default=0.95, description="Confidence level")]
    alpha: Annotated[OpenProbability, Field(default=0.05, description="Significance level")]
    seed: SeedField


class Direction(str, Enum):
    LOWER_TAIL = "LOWER_TAIL"
    UPPER_TAIL = "UPPER_TAIL"


class TestResult(BaseModel):
    """Outcome of the pooled-null bootstrap test for one statistic."""

    __test__ = False
    model_config = ConfigDict(frozen=True)

    measure: Measure
    method: Method
    statistic: Annotated[FiniteFloat, Field(description="Observed value of the statistic")]
    null_quantile: FiniteFloat
    reject: bool
    direction: Direction
    B: Annotated[int, Field(ge=2)]
    alpha: OpenProbability
    redraws: Annotated[int, Field(ge=0)] = 0

    @model_validator(mode="after")
    def check_decision(self) -> "TestResult":
        if self.direction is Direction.LOWER_TAIL:
            expected = self.statistic < self.null_quantile
        else:
            expected = self.statistic > self.null_quantile
        if self.reject != expected:
            raise ValueError("reject flag disagrees with statistic and null quantile")
        return self

    @property
    def label(self) -> str:
        return statistic_label(self.measure, self.method)


# ============================================================================
# Simulation
# ============================================================================


class Scale(str, Enum):
    DESK = "DESK"
    FULL = "FULL"


class ScenarioConfig(BaseModel):
    """One simulation cell: three class distributions and the run sizes."""

    model_config = ConfigDict(frozen=True)

    id: IdentifierField
    title: Annotated[str, Field(default="", description="Human-readable description")]
    f1: DistributionSpec
    f2: DistributionSpec
    f3: DistributionSpec
    theoretical_ovl: Optional[Probability] = None
    theoretical_vus: Optional[Probability] = None
    sizes: Annotated[list[SizeTriple], Field(default_factory=lambda: list(DEFAULT_SIZES), min_length=1)]
    reps: Annotated[int, Field(default=1000, ge=1, description="Monte Carlo replications")]
    boot: BootstrapConfig = Field(default_factory=BootstrapConfig)
    seed: SeedField

    @property
    def specs(self) -> tuple:
        return (self.f1, self.f2, self.f3)


class PowerRow(BaseModel):
    """Rejection proportions of the requested statistics at one size triple."""

    model_config = ConfigDict(frozen=True)

    scenario_id: str
    sizes: tuple[int, int, int]
    reps: Annotated[int, Field(ge=0, description="Replications that completed")]
    proportions: dict[str, Probability]
    mc_se: dict[str, Annotated[float, Field(ge=0)]]
    failures: Annotated[int, Field(ge=0)] = 0
    flagged: Annotated[bool, Field(description="More than 1% of replications failed")] = False


class BiasCell(BaseModel):
    """
    Bias, RMSE and CI coverage of one estimator at one common class size.

    The three measures are None when every replication failed.
    """

    model_config = ConfigDict(frozen=True)

    n: Annotated[int, Field(ge=2)]
    bias: Optional[FiniteFloat] = None
    rmse: Optional[Annotated[float, Field(ge=0)]] = None
    coverage: Optional[Probability] = None
    reps: Annotated[int, Field(ge=0)]
    failures: Annotated[int, Field(ge=0)] = 0


class BiasRow(BaseModel):
    """Bias study results of one estimator on one scenario."""

    model_config = ConfigDict(frozen=True)

    scenario_id: str
    estimator: str
    cells: list[BiasCell]


class TableReproduction(BaseModel):
    """Computed rows of a published table beside the published values."""

    model_config = ConfigDict(frozen=True)

    table_id: str
    scale: Scale
    records: list[dict[str, Union[str, int, float, None]]]
    text: str


# ============================================================================
# Marker analysis
# ============================================================================


class MarkerDataset(BaseModel):
    """One marker's measurements split into the three ordered classes."""

    model_config = ConfigDict(frozen=True)

    marker_name: Annotated[str, BeforeValidator(strip_whitespace), Field(min_length=1)]
    sample: ThreeClassSample
    class_labels: tuple[str, str, str]
    oriented: bool = False
    orientation_sign: Literal[1, -1] = 1
    dropped_rows: Annotated[int, Field(ge=0)] = 0
    warnings: tuple[str, ...] = ()

    @field_validator("class_labels")
    @classmethod
    def check_distinct(cls, value: tuple[str, str, str]) -> tuple[str, str, str]:
        if len(set(value)) != 3:
            raise ValueError(f"class labels must be distinct, got {value}")
        return value

    @field_validator("sample")
    @classmethod
    def check_sizes(cls, value: ThreeClassSample) -> ThreeClassSample:
        if min(value.sizes) < 2:
            raise ValueError(f"every class needs at least 2 values, got sizes {value.sizes}")
        return value


class ClassNormality(BaseModel):
    """Shapiro-Wilk result for one class."""

    model_config = ConfigDict(frozen=True)

    label: str
    n: int
    w: Annotated[float, Field(gt=0, le=1)]
    p_value: Probability


class NormalityReport(BaseModel):
    """Per-class Shapiro-Wilk screening."""

    model_config = ConfigDict(frozen=True)

    classes: tuple[ClassNormality, ClassNormality, ClassNormality]
    threshold: OpenProbability = 0.05
    overall_normal: bool

    @model_validator(mode="after")
    def check_overall(self) -> "NormalityReport":
        if self.overall_normal != all(entry.p_value >= self.threshold for entry in self.classes):
            raise ValueError("overall_normal must equal 'every p-value >= threshold'")
        return self


class MarkerReport(BaseModel):
    """Everything ``analyze_marker`` found out about one marker."""

    model_config = ConfigDict(frozen=True)

    marker: str
    class_labels: tuple[str, str, str]
    sizes: tuple[int, int, int]
    orientation_sign: Literal[1, -1]
    normality: NormalityReport
    parametric_method: Optional[Method] = None
    bootstrap: BootstrapConfig
    estimates: list[EstimateResult]
    tests: list[TestResult] = Field(default_factory=list)
    warnings: list[str] = Field(default_factory=list)

    def estimate_for(self, label: str) -> EstimateResult:
        for estimate in self.estimates:
            if estimate.label == label:
                return estimate
        raise KeyError(label)
