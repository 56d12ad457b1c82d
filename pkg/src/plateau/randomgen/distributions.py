from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from plateau.errors import ConfigError

DistKind = Literal["exp", "pareto", "det", "uniform"]

_ALIASES: dict[str, DistKind] = {
    "exp": "exp",
    "exponential": "exp",
    "pareto": "pareto",
    "det": "det",
    "deterministic": "det",
    "uniform": "uniform",
    "unif": "uniform",
}

_ARITY: dict[DistKind, int] = {"exp": 1, "pareto": 2, "det": 1, "uniform": 2}


@dataclass(frozen=True, slots=True)
class DistSpec:
    """
    Interarrival or service time law.

    Parameters per kind:
      exp      (rate,)          mean 1/rate
      pareto   (scale, index)   P(X > x) = (scale/x)^index on [scale, inf)
      det      (value,)
      uniform  (lo, hi)
    """

    kind: DistKind
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.kind not in _ARITY:
            raise ConfigError(f"Unknown distribution kind '{self.kind}'")
        if len(self.params) != _ARITY[self.kind]:
            raise ConfigError(
                f"{self.kind} takes {_ARITY[self.kind]} parameter(s), got {len(self.params)}"
            )
        if not all(math.isfinite(p) for p in self.params):
            raise ConfigError(f"{self.kind} parameters must be finite: {self.params}")
        if self.kind == "uniform":
            lo, hi = self.params
            if lo < 0 or hi <= lo:
                raise ConfigError(f"uniform needs 0 <= lo < hi, got {self.params}")
        elif any(p <= 0 for p in self.params):
            raise ConfigError(f"{self.kind} parameters must be strictly positive: {self.params}")

    @classmethod
    def exponential(cls, rate: float) -> DistSpec:
        return cls("exp", (float(rate),))

    @classmethod
    def pareto(cls, scale: float, index: float) -> DistSpec:
        return cls("pareto", (float(scale), float(index)))

    @classmethod
    def deterministic(cls, value: float) -> DistSpec:
        return cls("det", (float(value),))

    @classmethod
    def uniform(cls, lo: float, hi: float) -> DistSpec:
        return cls("uniform", (float(lo), float(hi)))

    @property
    def mean(self) -> float:
        if self.kind == "exp":
            return 1.0 / self.params[0]
        if self.kind == "pareto":
            scale, index = self.params
            return math.inf if index <= 1 else index * scale / (index - 1)
        if self.kind == "det":
            return self.params[0]
        lo, hi = self.params
        return 0.5 * (lo + hi)

    def scaled(self, factor: float) -> DistSpec:
        """Law of `factor * X`."""
        if factor <= 0:
            raise ConfigError(f"scale factor must be positive, got {factor}")
        if self.kind == "exp":
            return DistSpec.exponential(self.params[0] / factor)
        if self.kind == "pareto":
            return DistSpec.pareto(self.params[0] * factor, self.params[1])
        if self.kind == "det":
            return DistSpec.deterministic(self.params[0] * factor)
        return DistSpec.uniform(self.params[0] * factor, self.params[1] * factor)

    def draw(self, generator: np.random.Generator, n: int) -> np.ndarray:
        if n < 0:
            raise ValueError(f"sample size must be >= 0, got {n}")
        if self.kind == "exp":
            return generator.exponential(1.0 / self.params[0], size=n)
        if self.kind == "pareto":
            scale, index = self.params
            # numpy's pareto is the Lomax law on [0, inf); shift to support [1, inf).
            return scale * (1.0 + generator.pareto(index, size=n))
        if self.kind == "det":
            return np.full(n, self.params[0])
        return generator.uniform(self.params[0], self.params[1], size=n)

    def __str__(self) -> str:
        return ":".join([self.kind, *(f"{p:g}" for p in self.params)])


def parse_dist_spec(text: str) -> DistSpec:
    """Parse strings such as 'pareto:1:1.5', 'exp:0.3226', 'det:2.0', 'uniform:0:1'."""
    parts = [part.strip() for part in text.strip().split(":")]
    kind = _ALIASES.get(parts[0].lower()) if parts and parts[0] else None
    if kind is None:
        raise ConfigError(f"Unknown distribution spec '{text}'")
    try:
        params = tuple(float(part) for part in parts[1:])
    except ValueError as exc:
        raise ConfigError(f"Non-numeric parameter in distribution spec '{text}'") from exc
    return DistSpec(kind, params)
