"""Exception hierarchy shared across the package."""


class SurvCompError(Exception):
    """Base class for all survcomp errors."""


class InvalidInputError(SurvCompError, ValueError):
    """An observation, dataset, or parameter violates a basic requirement."""


class NoEventsError(SurvCompError):
    """The pooled sample contains no observed events."""


class DegenerateStatisticError(SurvCompError):
    """A test statistic has no usable null distribution."""


class DegenerateVarianceError(DegenerateStatisticError):
    """Null variance is zero, so no standardized statistic exists."""


class DegenerateExpectationError(DegenerateStatisticError):
    """An expected event count is zero, so the chi-square form is undefined."""


class CalibrationError(SurvCompError):
    """A censoring-rate calibration target could not be bracketed."""


class DatasetParseError(SurvCompError):
    """A dataset file failed to parse; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
