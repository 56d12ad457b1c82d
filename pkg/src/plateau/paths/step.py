from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, overload

import numpy as np
from numpy.typing import ArrayLike, NDArray

FloatArray = NDArray[np.float64]

EQUALITY_ATOL = 1e-12


@dataclass(frozen=True, slots=True, eq=False)
class StepPath:
    """
    Right-continuous piecewise-constant path on [0, inf).

    The path equals `value_at_zero` on [0, breakpoints[0]) and `values[k]` on
    [breakpoints[k], breakpoints[k + 1]). Breakpoints are strictly increasing and strictly
    positive; a breakpoint supplied at t=0 is folded into `value_at_zero`.
    """

    breakpoints: FloatArray
    values: FloatArray
    value_at_zero: float = 0.0

    def __post_init__(self) -> None:
        bp = np.array(self.breakpoints, dtype=np.float64).ravel()
        vals = np.array(self.values, dtype=np.float64).ravel()
        v0 = float(self.value_at_zero)
        if bp.shape != vals.shape:
            raise ValueError(
                f"breakpoints and values must have the same length ({bp.size} != {vals.size})"
            )
        if bp.size and not np.all(np.isfinite(bp)):
            raise ValueError("breakpoints must be finite")
        if bp.size and bp[0] < 0:
            raise ValueError("breakpoints must be >= 0")
        if bp.size > 1 and not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if bp.size and bp[0] == 0.0:
            v0 = float(vals[0])
            bp, vals = bp[1:], vals[1:]
        bp.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "value_at_zero", v0)

    # -- constructors -------------------------------------------------------------------

    @classmethod
    def constant(cls, value: float = 0.0) -> StepPath:
        return cls(np.empty(0), np.empty(0), value)

    @classmethod
    def indicator(cls, start: float, height: float = 1.0) -> StepPath:
        """Path `height * 1_{[start, inf)}`."""
        if start <= 0:
            return cls.constant(height)
        return cls(np.array([start]), np.array([height]), 0.0)

    @classmethod
    def from_points(
        cls, times: ArrayLike, values: ArrayLike, value_at_zero: float = 0.0
    ) -> StepPath:
        """Build from unsorted (time, value) pairs; duplicate times keep the later value."""
        t = np.asarray(times, dtype=np.float64).ravel()
        v = np.asarray(values, dtype=np.float64).ravel()
        if t.shape != v.shape:
            raise ValueError("times and values must have the same length")
        order = np.argsort(t, kind="stable")
        t, v = t[order], v[order]
        if t.size:
            keep = np.append(t[1:] != t[:-1], True)
            t, v = t[keep], v[keep]
        return cls(t, v, value_at_zero)

    @classmethod
    def from_counts(cls, values: ArrayLike) -> StepPath:
        """Path t -> values[floor(t) - 1] for t >= 1 and 0 before, i.e. X(t) = X_{floor(t)}."""
        v = np.asarray(values, dtype=np.float64).ravel()
        return cls(np.arange(1, v.size + 1, dtype=np.float64), v, 0.0)

    # -- evaluation ---------------------------------------------------------------------

    @overload
    def __call__(self, t: float) -> float: ...

    @overload
    def __call__(self, t: NDArray) -> FloatArray: ...

    def __call__(self, t: float | ArrayLike) -> float | FloatArray:
        return self.evaluate(t)

    def evaluate(self, t: float | ArrayLike) -> float | FloatArray:
        """Right-continuous value p(t)."""
        times, scalar = _as_times(t)
        idx = np.searchsorted(self.breakpoints, times, side="right") - 1
        out = self._lookup(idx)
        return float(out[0]) if scalar else out

    def evaluate_left(self, t: float | ArrayLike) -> float | FloatArray:
        """Left limit p(t-) for t > 0 and p(0) at t = 0."""
        times, scalar = _as_times(t)
        idx = np.searchsorted(self.breakpoints, times, side="left") - 1
        out = self._lookup(idx)
        return float(out[0]) if scalar else out

    def _lookup(self, idx: NDArray[np.intp]) -> FloatArray:
        if self.values.size == 0:
            return np.full(idx.shape, self.value_at_zero)
        picked = self.values[np.clip(idx, 0, None)]
        return np.where(idx >= 0, picked, self.value_at_zero)

    # -- structure ----------------------------------------------------------------------

    def __len__(self) -> int:
        return int(self.breakpoints.size)

    @property
    def last_value(self) -> float:
        return float(self.values[-1]) if self.values.size else self.value_at_zero

    def jumps(self) -> tuple[FloatArray, FloatArray]:
        """Times and signed sizes p(t) - p(t-) of the breakpoints."""
        prev = np.concatenate(([self.value_at_zero], self.values[:-1]))
        return self.breakpoints.copy(), self.values - prev

    def canonical(self) -> StepPath:
        """Same path with redundant breakpoints (no value change) removed."""
        if self.values.size == 0:
            return self
        prev = np.concatenate(([self.value_at_zero], self.values[:-1]))
        keep = self.values != prev
        return StepPath(self.breakpoints[keep], self.values[keep], self.value_at_zero)

    def equals(self, other: StepPath, atol: float = EQUALITY_ATOL) -> bool:
        """Pointwise equality within `atol` on the merged breakpoint grid."""
        if abs(self.value_at_zero - other.value_at_zero) > atol:
            return False
        grid = merge_grids(self, other)
        if grid.size == 0:
            return True
        return bool(np.all(np.abs(self.evaluate(grid) - other.evaluate(grid)) <= atol))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepPath):
            return NotImplemented
        return self.equals(other)

    def __repr__(self) -> str:
        return (
            f"StepPath(n={self.breakpoints.size}, v0={self.value_at_zero!r}, "
            f"breakpoints={self.breakpoints[:4].tolist()}..., values={self.values[:4].tolist()}...)"
        )

    # -- arithmetic on merged grids -----------------------------------------------------

    def combine(self, other: StepPath, op: Callable[[FloatArray, FloatArray], FloatArray]) -> StepPath:
        grid = merge_grids(self, other)
        v0 = op(np.array([self.value_at_zero]), np.array([other.value_at_zero]))[0]
        return StepPath(grid, op(self.evaluate(grid), other.evaluate(grid)), float(v0))

    def __add__(self, other: StepPath) -> StepPath:
        return self.combine(other, np.add)

    def __sub__(self, other: StepPath) -> StepPath:
        return self.combine(other, np.subtract)

    def maximum(self, other: StepPath) -> StepPath:
        return self.combine(other, np.maximum)


def merge_grids(*paths: StepPath) -> FloatArray:
    """Sorted union of the breakpoints of all paths."""
    if not paths:
        return np.empty(0)
    grid = paths[0].breakpoints
    for path in paths[1:]:
        grid = np.union1d(grid, path.breakpoints)
    return np.asarray(grid, dtype=np.float64)


def evaluate(p: StepPath, t: float | ArrayLike) -> float | FloatArray:
    return p.evaluate(t)


def evaluate_left(p: StepPath, t: float | ArrayLike) -> float | FloatArray:
    return p.evaluate_left(t)


def sum_paths(paths: Sequence[StepPath]) -> StepPath:
    total = StepPath.constant(0.0)
    for path in paths:
        total = total + path
    return total


def _as_times(t: float | ArrayLike) -> tuple[FloatArray, bool]:
    scalar = np.ndim(t) == 0
    times = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(times < 0) or np.any(np.isnan(times)):
        raise ValueError("path evaluation requires t >= 0")
    return times, scalar
