"""Jump-exact spectrally positive paths: drift plus finitely many compensated upward jumps."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from plateau.errors import HorizonExceededError
from plateau.limitlaw.constants import c_alpha as stable_constant
from plateau.limitlaw.constants import check_alpha
from plateau.randomgen import SeededStream, stable_jump_ppm

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

DEFAULT_EPS = 1e-4


@dataclass(frozen=True, slots=True)
class JumpDriftPath:
    """
    X(t) = (drift + compensation_drift) t + sum_{t_j <= t} J_j on [0, horizon].

    Between jumps the path is linear; every query is answered in closed form.
    """

    drift: float
    jump_times: FloatArray
    jump_sizes: FloatArray
    horizon: float
    compensation_drift: float = 0.0

    def __post_init__(self) -> None:
        times = np.array(self.jump_times, dtype=np.float64).ravel()
        sizes = np.array(self.jump_sizes, dtype=np.float64).ravel()
        if times.shape != sizes.shape:
            raise ValueError("jump_times and jump_sizes must have the same length")
        if not self.horizon > 0:
            raise ValueError(f"horizon must be > 0 (got {self.horizon})")
        if times.size:
            if times[0] < 0 or times[-1] > self.horizon:
                raise ValueError("jump times must lie in [0, horizon]")
            if np.any(np.diff(times) <= 0):
                raise ValueError("jump times must be strictly increasing")
            if np.any(sizes <= 0):
                raise ValueError("jump sizes must be > 0")
        times.setflags(write=False)
        sizes.setflags(write=False)
        object.__setattr__(self, "jump_times", times)
        object.__setattr__(self, "jump_sizes", sizes)
        object.__setattr__(self, "horizon", float(self.horizon))

    @classmethod
    def single_jump(
        cls, time: float, size: float, horizon: float, drift: float = -1.0
    ) -> JumpDriftPath:
        return cls(drift, np.array([time]), np.array([size]), horizon)

    @property
    def slope(self) -> float:
        return self.drift + self.compensation_drift

    @property
    def jump_count(self) -> int:
        return int(self.jump_times.size)

    def cumulative_jumps(self) -> FloatArray:
        return np.cumsum(self.jump_sizes)

    def value(self, t: float | ArrayLike) -> float | FloatArray:
        """X(t), right-continuous."""
        times, scalar = self._times(t)
        k = np.searchsorted(self.jump_times, times, side="right")
        out = self.slope * times + _prefix(self.cumulative_jumps(), k)
        return float(out[0]) if scalar else out

    def left_value(self, t: float | ArrayLike) -> float | FloatArray:
        """X(t-)."""
        times, scalar = self._times(t)
        k = np.searchsorted(self.jump_times, times, side="left")
        out = self.slope * times + _prefix(self.cumulative_jumps(), k)
        return float(out[0]) if scalar else out

    def left_limits_at_jumps(self) -> FloatArray:
        """X(t_j-) for every jump time t_j."""
        before = np.concatenate(([0.0], self.cumulative_jumps()[:-1]))
        return self.slope * self.jump_times + before

    def terminal_value(self) -> float:
        return float(self.slope * self.horizon + self.jump_sizes.sum())

    def local_time_at_horizon(self) -> float:
        """L(T) = -inf_{s <= T} X(s); the infimum is reached at a jump left limit or at T."""
        candidates = np.concatenate(([0.0, self.terminal_value()], self.left_limits_at_jumps()))
        return float(-min(0.0, candidates.min()))

    def _times(self, t: float | ArrayLike) -> tuple[FloatArray, bool]:
        scalar = np.ndim(t) == 0
        times = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if np.any(times < 0) or np.any(times > self.horizon):
            raise ValueError(f"query times must lie in [0, {self.horizon}]")
        return times, scalar


def simulate_X(alpha: float, horizon: float, eps: float, stream: SeededStream) -> JumpDriftPath:
    """
    Drift -1 plus compensated stable jumps larger than `eps`.

    Jumps follow stable_jump_ppm with the constant c_alpha; all retained jumps are compensated,
    so the path approximates the process with Laplace exponent s + s^alpha.
    """

    alpha = check_alpha(alpha)
    c = stable_constant(alpha)
    times, sizes = stable_jump_ppm(alpha, c, horizon, eps, stream)
    path = JumpDriftPath(
        drift=-1.0,
        jump_times=times,
        jump_sizes=sizes,
        horizon=horizon,
        compensation_drift=compensation_drift(alpha, c, eps),
    )
    logger.debug(
        "Simulated limit path",
        extra={"alpha": alpha, "eps": eps, "horizon": horizon, "jumps": path.jump_count},
    )
    return path


def compensation_drift(alpha: float, c: float, eps: float) -> float:
    """-c int_eps^inf x x^{-1-alpha} dx."""
    return -c * eps ** (1.0 - alpha) / (alpha - 1.0)


def truncation_variance(alpha: float, c: float, eps: float) -> float:
    """Variance per unit time of the discarded jumps below eps: c eps^{2-alpha} / (2 - alpha)."""
    check_alpha(alpha)
    return c * eps ** (2.0 - alpha) / (2.0 - alpha)


def extend(
    path: JumpDriftPath, horizon: float, alpha: float, eps: float, stream: SeededStream
) -> JumpDriftPath:
    """Lengthen `path` to `horizon` with an independent jump block on (path.horizon, horizon]."""
    if horizon <= path.horizon:
        raise ValueError(f"new horizon {horizon} must exceed {path.horizon}")
    c = stable_constant(alpha)
    times, sizes = stable_jump_ppm(
        alpha, c, horizon - path.horizon, eps, stream, start=path.horizon
    )
    keep = times > path.horizon
    return JumpDriftPath(
        drift=path.drift,
        jump_times=np.concatenate((path.jump_times, times[keep])),
        jump_sizes=np.concatenate((path.jump_sizes, sizes[keep])),
        horizon=horizon,
        compensation_drift=path.compensation_drift,
    )


def simulate_X_until(
    alpha: float,
    v_max: float,
    eps: float,
    stream: SeededStream,
    *,
    horizon: float | None = None,
    max_doublings: int = 30,
) -> JumpDriftPath:
    """Simulate, doubling the horizon with fresh blocks, until L(T) > v_max."""
    current = horizon if horizon is not None else 2.0 * v_max + 1.0
    path = simulate_X(alpha, current, eps, stream.child("block-0"))
    for block in range(1, max_doublings + 1):
        if path.local_time_at_horizon() > v_max:
            return path
        path = extend(path, 2.0 * path.horizon, alpha, eps, stream.child(f"block-{block}"))
    if path.local_time_at_horizon() > v_max:
        return path
    raise HorizonExceededError(
        f"local time did not reach {v_max} within horizon {path.horizon}",
        suggested_horizon=2.0 * path.horizon,
    )


def _prefix(cumulative: FloatArray, k: NDArray[np.intp]) -> FloatArray:
    if cumulative.size == 0:
        return np.zeros(k.shape)
    return np.where(k > 0, cumulative[np.clip(k - 1, 0, None)], 0.0)
