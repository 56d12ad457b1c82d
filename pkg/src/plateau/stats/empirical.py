from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats

FloatArray = NDArray[np.float64]
CdfFn = Callable[[FloatArray], ArrayLike]


@dataclass(frozen=True, slots=True)
class EmpiricalSample:
    """Sorted copy of a Monte Carlo sample plus where it came from."""

    values: FloatArray
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        values = np.sort(np.array(self.values, dtype=np.float64).ravel())
        if np.any(np.isnan(values)):
            raise ValueError("sample contains NaN")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return int(self.values.size)


def _sorted(sample: EmpiricalSample | ArrayLike) -> FloatArray:
    values = sample.values if isinstance(sample, EmpiricalSample) else np.sort(np.ravel(sample))
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("empirical sample must be non-empty")
    return values


def ecdf(sample: EmpiricalSample | ArrayLike, x: float | ArrayLike) -> float | FloatArray:
    """Fraction of the sample <= x."""
    values = _sorted(sample)
    out = np.searchsorted(values, np.atleast_1d(np.asarray(x, dtype=np.float64)), side="right")
    out = out / values.size
    return float(out[0]) if np.ndim(x) == 0 else out


def ks_distance(sample: EmpiricalSample | ArrayLike, cdf: CdfFn) -> float:
    """
    sup_x |ecdf(x) - cdf(x)| for a model cdf.

    Checked at each distinct sample value from both sides: ecdf(x) against cdf(x), and
    ecdf(x-) against cdf(x-) (the model cdf is read just below x).
    """

    values = _sorted(sample)
    n = values.size
    unique, counts = np.unique(values, return_counts=True)
    upper = np.cumsum(counts) / n
    lower = upper - counts / n
    at = np.asarray(cdf(unique), dtype=np.float64)
    below = np.asarray(cdf(np.nextafter(unique, -np.inf)), dtype=np.float64)
    return float(max(np.max(np.abs(upper - at)), np.max(np.abs(lower - below))))


def ks_two_sample(
    a: EmpiricalSample | ArrayLike, b: EmpiricalSample | ArrayLike
) -> float:
    return float(stats.ks_2samp(_sorted(a), _sorted(b)).statistic)


def ks_critical_value(n: int, level: float = 0.95) -> float:
    """Quantile of the one-sample Kolmogorov statistic for sample size n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return float(stats.kstwo.ppf(level, n))


def hill_estimator(sample: EmpiricalSample | ArrayLike, k: int) -> float:
    """Hill estimate of the tail index from the k largest (positive) order statistics."""
    values = _sorted(sample)
    if not 1 <= k < values.size:
        raise ValueError(f"k must lie in [1, {values.size - 1}] (got {k})")
    top = values[-(k + 1) :]
    if top[0] <= 0:
        raise ValueError("Hill estimator needs the k+1 largest values to be positive")
    return float(1.0 / np.mean(np.log(top[1:] / top[0])))


def quantiles(sample: EmpiricalSample | ArrayLike, probs: ArrayLike) -> FloatArray:
    return np.quantile(_sorted(sample), np.asarray(probs, dtype=np.float64))
