from __future__ import annotations


class PlateauError(Exception):
    """Base class for errors raised by the plateau package."""


class ConfigError(PlateauError, ValueError):
    """Invalid configuration value or distribution spec string."""


class HorizonExceededError(PlateauError):
    """A query reached past the end of a simulated path."""

    def __init__(self, message: str, *, suggested_horizon: float | None = None) -> None:
        super().__init__(message)
        self.suggested_horizon = suggested_horizon


class InsufficientJobsError(HorizonExceededError):
    """A tandem simulation did not contain enough jobs to cover the requested time horizon."""

    def __init__(self, message: str, *, suggested_jobs: int | None = None) -> None:
        super().__init__(message)
        self.suggested_jobs = suggested_jobs


class IdentityViolation(PlateauError):
    """One or more exact identities failed in the verify suite."""

    def __init__(self, failing: list[str]) -> None:
        super().__init__(f"Identity checks failed: {', '.join(failing)}")
        self.failing = failing


class AcceptanceFailure(PlateauError):
    """A Monte Carlo comparison exceeded its acceptance threshold."""
