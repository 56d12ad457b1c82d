from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Protocol

from plateau.errors import ConfigError
from plateau.randomgen import DistSpec


class ModelFamily(Protocol):
    """A sequence of tandem models indexed by r > 0 with a norming sequence a_r."""

    @property
    def service_spec(self) -> DistSpec:
        """Service law, shared by every model in the family."""

    def arrival(self, r: float) -> DistSpec:
        """Interarrival law of the r-th model."""

    def norming(self, r: float) -> float:
        """a_r."""

    def arrival_mean(self, r: float) -> float:
        """mu^r, the mean interarrival time of the r-th model."""


def _check_r(r: float) -> float:
    if not r > 0:
        raise ConfigError(f"r must be > 0 (got {r})")
    return float(r)


def _check_alpha(alpha: float) -> float:
    if not 1.0 < alpha < 2.0:
        raise ConfigError(f"alpha must lie in (1, 2) (got {alpha})")
    return float(alpha)


@dataclass(frozen=True, slots=True)
class HeavyTrafficFamily:
    """
    Service law fixed with mean nu; interarrival variates of a base law rescaled to mean
    mu^r = nu (1 - gamma a_r / r) with a_r = r^{1/alpha}, so (r / a_r)(1 - mu^r / nu) = gamma.
    """

    alpha: float
    gamma: float
    service: DistSpec
    base_arrival: DistSpec = DistSpec.exponential(1.0)

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)
        if not math.isfinite(self.service.mean):
            raise ConfigError(f"service law {self.service} needs a finite mean")

    @property
    def service_spec(self) -> DistSpec:
        return self.service

    @property
    def nu(self) -> float:
        return self.service.mean

    def norming(self, r: float) -> float:
        return _check_r(r) ** (1.0 / self.alpha)

    def arrival_mean(self, r: float) -> float:
        mean = self.nu * (1.0 - self.gamma * self.norming(r) / r)
        if mean <= 0:
            raise ConfigError(
                f"r={r} is too small for gamma={self.gamma}: interarrival mean {mean} <= 0"
            )
        return mean

    def rho(self, r: float) -> float:
        """mu^r / nu (arrival mean over service mean)."""
        return self.arrival_mean(r) / self.nu

    def arrival(self, r: float) -> DistSpec:
        return self.base_arrival.scaled(self.arrival_mean(r) / self.base_arrival.mean)


@dataclass(frozen=True, slots=True)
class FixedFamily:
    """The same model for every r, normed by a_r = r^{1/alpha}; used for fluid limits."""

    arrival_spec: DistSpec
    service: DistSpec
    alpha: float = 1.5

    def __post_init__(self) -> None:
        _check_alpha(self.alpha)

    @property
    def service_spec(self) -> DistSpec:
        return self.service

    def norming(self, r: float) -> float:
        return _check_r(r) ** (1.0 / self.alpha)

    def arrival_mean(self, r: float) -> float:
        _check_r(r)
        return self.arrival_spec.mean

    def arrival(self, r: float) -> DistSpec:
        _check_r(r)
        return self.arrival_spec
