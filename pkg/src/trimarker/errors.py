"""
Exception hierarchy for trimarker.

Every error raised on purpose by the package derives from ``TrimarkerError`` and
carries the process exit code the CLI uses for it.
"""

from enum import IntEnum
from typing import Optional


class ExitCode(IntEnum):
    """Process exit codes of the ``trimarker`` command."""

    SUCCESS = 0
    USAGE = 1
    DATA = 2
    NUMERICAL = 3


class TrimarkerError(Exception):
    """Base class for all trimarker errors."""

    exit_code: ExitCode = ExitCode.USAGE


# ============================================================================
# Usage errors (exit code 1)
# ============================================================================


class UsageError(TrimarkerError, ValueError):
    """Invalid request: bad arguments, unknown identifiers, malformed specs."""

    exit_code = ExitCode.USAGE


class SpecParseError(UsageError):
    """A distribution or scenario text could not be parsed."""


class UnsupportedEstimatorError(UsageError):
    """The (measure, method) pair has no estimator, e.g. an empirical OVL."""


class UnknownTableError(UsageError):
    """``reproduce_table`` was asked for an id that is not built in."""

    def __init__(self, table_id: str, valid_ids: list[str]):
        self.table_id = table_id
        self.valid_ids = valid_ids
        super().__init__(f"Unknown table id '{table_id}'. Valid ids: {', '.join(valid_ids)}")


# ============================================================================
# Data errors (exit code 2)
# ============================================================================


class DataError(TrimarkerError, ValueError):
    """Input data is unusable: missing columns, bad rows, too few observations."""

    exit_code = ExitCode.DATA

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


# ============================================================================
# Numerical errors (exit code 3)
# ============================================================================


class NumericalError(TrimarkerError, ArithmeticError):
    """A numerical kernel failed to produce a trustworthy result."""

    exit_code = ExitCode.NUMERICAL


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge, or the integrand returned NaN."""

    def __init__(
        self,
        message: str,
        estimate: Optional[float] = None,
        error_bound: Optional[float] = None,
        abscissa: Optional[float] = None,
    ):
        self.estimate = estimate
        self.error_bound = error_bound
        self.abscissa = abscissa
        super().__init__(message)


class OptimizationError(NumericalError):
    """Scalar maximization had nothing finite to work with."""


class DegenerateFitError(NumericalError):
    """A class has zero spread, so a normal, Box-Cox or kernel fit is undefined."""


class BootstrapError(NumericalError):
    """Too many resamples failed; the redraw budget is exhausted."""

    def __init__(self, message: str, attempts: int, redraws: int):
        self.attempts = attempts
        self.redraws = redraws
        super().__init__(message)
