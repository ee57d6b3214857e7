"""
Configuration settings for trimarker using pydantic_settings.

Values come from ``TRIMARKER_*`` environment variables or a ``.env`` file in the
working directory. ``TRIMARKER_SEED`` is the default seed for every command that
draws random numbers.
"""

from pathlib import Path
from typing import Annotated

from pydantic import AfterValidator, BeforeValidator, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


# Helper functions
def normalize_level_name(value: str) -> str:
    """Upper-case and strip a logging level name."""
    return str(value).strip().upper()


LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def validate_level_name(value: str) -> str:
    """Validate that the value names a standard logging level."""
    if value not in LOG_LEVELS:
        raise ValueError(f"Unknown log level '{value}' (use DEBUG, INFO, WARNING or ERROR)")
    return value


# ============================================================================
# Single-use field types for config.py
# ============================================================================

SeedField = Annotated[
    int,
    Field(default=20240517, ge=0, lt=2**64, description="Default seed for all random number streams"),
]

ProbabilityField = Annotated[float, Field(gt=0, lt=1)]

ResampleCountField = Annotated[int, Field(ge=2, description="Bootstrap resamples per estimate or test")]

ReplicationCountField = Annotated[int, Field(ge=1, description="Monte Carlo replications per sample-size triple")]

LogLevelField = Annotated[
    str,
    BeforeValidator(normalize_level_name),
    AfterValidator(validate_level_name),
    Field(default="WARNING", description="Log level for the trimarker loggers"),
]

ResultsDirectoryField = Annotated[
    Path,
    Field(
        default_factory=lambda: Path.cwd() / "results",
        description="Directory where simulate and reproduce-table write their rows",
    ),
]


class TrimarkerSettings(BaseSettings):
    """Application settings loaded from environment variables and .env file."""

    model_config = SettingsConfigDict(
        env_prefix="TRIMARKER_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Randomness
    seed: SeedField

    # Inference
    bootstrap_resamples: Annotated[ResampleCountField, Field(default=500)]
    confidence_level: Annotated[
        ProbabilityField, Field(default=0.95, description="Confidence level of percentile bootstrap intervals")
    ]
    significance_level: Annotated[
        ProbabilityField, Field(default=0.05, description="Significance level alpha of the pooled-null bootstrap test")
    ]
    normality_threshold: Annotated[
        ProbabilityField,
        Field(default=0.05, description="Shapiro-Wilk p-value below which the Box-Cox variant is chosen"),
    ]

    # Simulation scales
    desk_reps: Annotated[ReplicationCountField, Field(default=400)]
    desk_bootstrap: Annotated[ResampleCountField, Field(default=200)]
    full_reps: Annotated[ReplicationCountField, Field(default=1000)]
    full_bootstrap: Annotated[ResampleCountField, Field(default=500)]
    workers: Annotated[int, Field(default=1, ge=1, description="Worker processes for Monte Carlo replications")]

    # Output
    results_dir: ResultsDirectoryField
    log_level: LogLevelField


# Create a singleton instance of the settings
settings = TrimarkerSettings()
