"""Exception types shared across the lcoai package."""

from __future__ import annotations


class LcoaiError(Exception):
    """Base class for all errors raised by this package."""


class InvalidHorizonError(LcoaiError, ValueError):
    """A horizon with no periods or a non-positive period length."""


class UndefinedMetricError(LcoaiError):
    """The levelized cost is undefined (zero valid inferences)."""


class IncompatibleScenariosError(LcoaiError, ValueError):
    """Scenarios cannot be compared (mismatched horizons)."""


class LogParseError(LcoaiError, ValueError):
    """A malformed telemetry log line. Carries the 1-based line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ScenarioFileError(LcoaiError, ValueError):
    """A scenario configuration file that violates the schema.

    ``path`` locates the offending field, e.g. ``scenarios[0].opex.per_inference_usd``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
