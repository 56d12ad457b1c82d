"""Reflection at the running infimum, local time, excursions and the time-changed plateau."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from plateau.errors import HorizonExceededError
from plateau.limitproc.levy import JumpDriftPath

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, slots=True)
class ExcursionRecord:
    """One maximal interval where Y > 0, indexed by the local time at which it starts."""

    level: float
    start: float
    end: float
    max_jump: float
    censored: bool = False

    @property
    def lifetime(self) -> float:
        return self.end - self.start


class ReflectedPath:
    """
    Exact Y = X - inf X and L = -inf X for a path with negative slope and upward jumps.

    The infimum only moves along drift segments, so per segment k (between jump k and
    jump k+1) it is min(inf at the jump, X(t)).
    """

    def __init__(self, path: JumpDriftPath) -> None:
        if not path.slope < 0:
            raise ValueError(f"reflection requires a negative slope (got {path.slope})")
        self.path = path
        self.rate = -path.slope
        knots = np.concatenate(([0.0], path.jump_times))
        after = np.concatenate(([0.0], path.cumulative_jumps())) + path.slope * knots
        left = path.left_limits_at_jumps()
        # running infimum at each knot; a jump never lowers it
        inf_at = np.minimum.accumulate(np.concatenate(([0.0], left)))
        self.knots = knots
        self.x_after = after
        self.inf_at = inf_at
        segment_ends = np.append(path.jump_times, path.horizon)
        end_left = after + path.slope * (segment_ends - knots)
        self.local_end = -np.minimum(inf_at, end_left)

    @property
    def horizon(self) -> float:
        return self.path.horizon

    @property
    def local_time_total(self) -> float:
        return float(self.local_end[-1])

    def _segment(self, times: FloatArray) -> NDArray[np.intp]:
        return np.searchsorted(self.knots, times, side="right") - 1

    def X(self, t: float | ArrayLike) -> float | FloatArray:
        return self.path.value(t)

    def L(self, t: float | ArrayLike) -> float | FloatArray:
        times, scalar = self.path._times(t)
        k = self._segment(times)
        x = self.x_after[k] + self.path.slope * (times - self.knots[k])
        out = -np.minimum(self.inf_at[k], x)
        return float(out[0]) if scalar else out

    def Y(self, t: float | ArrayLike) -> float | FloatArray:
        times, scalar = self.path._times(t)
        k = self._segment(times)
        x = self.x_after[k] + self.path.slope * (times - self.knots[k])
        out = x - np.minimum(self.inf_at[k], x)
        return float(out[0]) if scalar else out

    def L_at_jumps(self) -> FloatArray:
        return -self.inf_at[1:]

    def inverse_local_time(self, v: float | ArrayLike) -> float | FloatArray:
        """inf{t : L(t) > v}; L has slope `rate` on the zero set and is flat elsewhere."""
        levels = np.atleast_1d(np.asarray(v, dtype=np.float64))
        if np.any(levels < 0):
            raise ValueError("local-time level must be >= 0")
        self._require_level(levels)
        k = np.searchsorted(self.local_end, levels, side="right")
        out = self.knots[k] + (self.x_after[k] + levels) / self.rate
        return float(out[0]) if np.ndim(v) == 0 else out

    def _require_level(self, levels: FloatArray) -> None:
        total = self.local_time_total
        if levels.size and levels.max() >= total:
            needed = float(levels.max())
            suggested = self.horizon + 2.0 * (needed - total) / self.rate + self.horizon
            raise HorizonExceededError(
                f"level {needed} exceeds simulated local time {total}",
                suggested_horizon=suggested,
            )

    # -- excursions ---------------------------------------------------------------------

    def excursion_starts(self) -> NDArray[np.intp]:
        """Indices of jumps taken while Y(t-) = 0."""
        left = self.path.left_limits_at_jumps()
        return np.flatnonzero(left <= self.inf_at[:-1])

    def excursions(self) -> list[ExcursionRecord]:
        starts = self.excursion_starts()
        if starts.size == 0:
            return []
        times = self.path.jump_times
        sizes = self.path.jump_sizes
        max_jumps = np.maximum.reduceat(sizes, starts)
        lasts = np.append(starts[1:] - 1, sizes.size - 1)
        records: list[ExcursionRecord] = []
        for first, last, biggest in zip(starts, lasts, max_jumps):
            level_x = self.inf_at[first + 1]
            # segment after the last jump of the block returns X to level_x
            seg = last + 1
            end = self.knots[seg] + (self.x_after[seg] - level_x) / self.rate
            censored = end > self.horizon
            records.append(
                ExcursionRecord(
                    level=float(-level_x),
                    start=float(times[first]),
                    end=float(min(end, self.horizon)),
                    max_jump=float(biggest),
                    censored=bool(censored),
                )
            )
        if records[-1].censored:
            logger.debug("Last excursion censored at horizon", extra={"horizon": self.horizon})
        return records

    # -- time-changed plateau -----------------------------------------------------------

    def Z(self, v: float | ArrayLike) -> float | FloatArray:
        """max(0, max over jumps s <= L^{-1}(v) of [jump(s) - (v - L(s))])."""
        levels = np.atleast_1d(np.asarray(v, dtype=np.float64))
        t_v = np.atleast_1d(self.inverse_local_time(levels))
        best = np.maximum.accumulate(self.path.jump_sizes + self.L_at_jumps())
        k = np.searchsorted(self.path.jump_times, t_v, side="right")
        reach = np.where(k > 0, best[np.clip(k - 1, 0, None)] if best.size else 0.0, -np.inf)
        out = np.maximum(0.0, reach - levels)
        return float(out[0]) if np.ndim(v) == 0 else out


def reflect_local_time(X: JumpDriftPath) -> ReflectedPath:
    return ReflectedPath(X)


def inverse_local_time(reflected: ReflectedPath, v: float | ArrayLike) -> float | FloatArray:
    return reflected.inverse_local_time(v)


def Z_of_v(X: JumpDriftPath | ReflectedPath, v: float | ArrayLike) -> float | FloatArray:
    reflected = X if isinstance(X, ReflectedPath) else ReflectedPath(X)
    return reflected.Z(v)


def excursion_decompose(X: JumpDriftPath | ReflectedPath) -> list[ExcursionRecord]:
    reflected = X if isinstance(X, ReflectedPath) else ReflectedPath(X)
    return reflected.excursions()


def Z_from_excursions(
    excursions: Sequence[ExcursionRecord], v: float | ArrayLike
) -> float | FloatArray:
    """sup over excursion levels u <= v of [max_jump(u) - (v - u)], floored at 0."""
    levels = np.atleast_1d(np.asarray(v, dtype=np.float64))
    u = np.array([e.level for e in excursions], dtype=np.float64)
    reach = np.maximum.accumulate(np.array([e.max_jump + e.level for e in excursions]))
    k = np.searchsorted(u, levels, side="right")
    if reach.size == 0:
        out = np.zeros(levels.shape)
    else:
        out = np.maximum(0.0, np.where(k > 0, reach[np.clip(k - 1, 0, None)], -np.inf) - levels)
    return float(out[0]) if np.ndim(v) == 0 else out


def excursion_levels_sup(excursions: Sequence[ExcursionRecord], v: float) -> float:
    """max(0, sup_{u <= v} [max_jump(u) - u]), the re-indexed form of Z(v)."""
    values = [e.max_jump - e.level for e in excursions if e.level <= v and not e.censored]
    return max([0.0, *values])


def max_jump_rate(excursions: Sequence[ExcursionRecord], q: float, local_time: float) -> float:
    """Uncensored excursions with max jump above q per unit of local time."""
    if local_time <= 0:
        raise ValueError("local_time must be > 0")
    count = sum(1 for e in excursions if e.max_jump > q and not e.censored)
    return count / local_time


class PlateauLimitPath:
    """M*(t) = max(0, max over jumps tau <= t/mu of [J - (L(t/mu) - L(tau))])."""

    def __init__(self, reflected: ReflectedPath, mu: float) -> None:
        if mu <= 0:
            raise ValueError(f"mu must be > 0 (got {mu})")
        self.reflected = reflected
        self.mu = mu
        self._best = np.maximum.accumulate(
            reflected.path.jump_sizes + reflected.L_at_jumps()
        )

    def __call__(self, t: float | ArrayLike) -> float | FloatArray:
        times = np.atleast_1d(np.asarray(t, dtype=np.float64)) / self.mu
        local = np.atleast_1d(self.reflected.L(times))
        k = np.searchsorted(self.reflected.path.jump_times, times, side="right")
        if self._best.size == 0:
            out = np.zeros(times.shape)
        else:
            reach = np.where(k > 0, self._best[np.clip(k - 1, 0, None)], -np.inf)
            out = np.maximum(0.0, reach - local)
        return float(out[0]) if np.ndim(t) == 0 else out

    def grid(self) -> FloatArray:
        """Physical times mu * t of the jumps of the underlying path."""
        return self.mu * self.reflected.path.jump_times


def M_star_path(X: JumpDriftPath | ReflectedPath, mu: float) -> PlateauLimitPath:
    reflected = X if isinstance(X, ReflectedPath) else ReflectedPath(X)
    return PlateauLimitPath(reflected, mu)
