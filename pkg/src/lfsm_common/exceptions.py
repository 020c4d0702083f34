from typing import Any, Optional


class LfsmError(Exception):
    """Base class of every error raised by the toolkit; carries the CLI exit code."""

    exit_code = 1

    def __init__(self, message: str, details: Optional[dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_record(self) -> dict[str, Any]:
        record = {"error": type(self).__name__, "message": self.message, "exit_code": self.exit_code}
        if self.details:
            record["details"] = self.details
        return record

    def __str__(self):
        return f"{type(self).__name__}: {self.message}"


# ---- input errors (exit code 1) ----


class InputError(LfsmError):
    exit_code = 1


class ParameterError(InputError):
    """A domain type or operation precondition was violated."""


class ConfigError(InputError):
    """Missing or malformed configuration."""


class CsvFormatError(InputError):
    """Time-series CSV could not be ingested; `row` is the 1-based line number in the file."""

    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message, {"row": row} if row is not None else None)
        self.row = row


# ---- numerical failures (exit code 2) ----


class NumericalError(LfsmError):
    exit_code = 2


class QuadratureError(NumericalError):
    def __init__(self, message: str, abserr: float):
        super().__init__(message, {"abserr": abserr})
        self.abserr = abserr


class EstimationError(NumericalError):
    """Parameter estimation failed; details hold the diagnostic."""


class DecompositionError(NumericalError):
    """The codifference decomposition could not be solved under the ordering constraints."""

    def __init__(self, message: str, report: Any = None):
        details = report.to_record() if report is not None and hasattr(report, "to_record") else None
        super().__init__(message, details)
        self.report = report


class NoSolutionError(DecompositionError):
    """Target of an off-diagonal equation lies outside the range of f on its domain."""


class IllConditionedError(NumericalError):
    pass


class NoUsableForecastsError(NumericalError):
    pass


class ReportWriteError(InputError):
    """Report destination could not be written."""
