"""Scaled plateau, fluid transfer counts and centred primitives of a model family."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from plateau.errors import InsufficientJobsError
from plateau.paths import StepPath, scale_path
from plateau.randomgen import SeededStream
from plateau.scaling.family import ModelFamily
from plateau.stats import ks_two_sample, quantiles
from plateau.tandem import (
    TandemTrajectory,
    build_trajectory,
    plateau_path,
    primitive_paths,
    simulate_inputs,
)

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]
T = TypeVar("T")
Out = TypeVar("Out")
Mapper = Callable[[Callable[[T], Out], Sequence[T]], list[Out]]

JOB_SAFETY = 1.25
JOB_SLACK = 32
SWEEP_PROBS = (0.1, 0.25, 0.5, 0.75, 0.9, 0.99)


def jobs_for_horizon(fam: ModelFamily, r: float, horizon: float) -> int:
    """Job count whose arrivals cover time r * horizon with margin."""
    return int(math.ceil(JOB_SAFETY * r * horizon / fam.arrival_mean(r))) + JOB_SLACK


def simulate_model(
    fam: ModelFamily,
    r: float,
    stream: SeededStream,
    *,
    horizon: float = 1.0,
    jobs: int | None = None,
) -> TandemTrajectory:
    """Run the r-th model until its arrivals pass time r * horizon."""
    n = jobs if jobs is not None else jobs_for_horizon(fam, r, horizon)
    inputs = simulate_inputs(fam.arrival(r), fam.service_spec, n, stream)
    traj = build_trajectory(inputs, vectorized=True)
    end = r * horizon
    if n == 0 or traj.U[-1] <= end:
        reached = float(traj.U[-1]) if n else 0.0
        raise InsufficientJobsError(
            f"{n} jobs reach time {reached:.6g}, short of r*T = {end:.6g}",
            suggested_jobs=2 * n + JOB_SLACK,
        )
    return traj


def scaled_plateau(
    fam: ModelFamily,
    r: float,
    stream: SeededStream,
    *,
    horizon: float = 1.0,
    jobs: int | None = None,
) -> StepPath:
    """t -> M^r(r t) / a_r, valid on [0, horizon]."""
    traj = simulate_model(fam, r, stream, horizon=horizon, jobs=jobs)
    return scale_path(plateau_path(traj), fam.norming(r), r)


def transfer_count_path(traj: TandemTrajectory) -> StepPath:
    """R(t) as a step path jumping by one at every transfer time."""
    return StepPath.from_points(traj.D, np.arange(1, traj.n + 1, dtype=np.float64), 0.0)


def fluid_R(
    fam: ModelFamily,
    r: float,
    stream: SeededStream,
    *,
    horizon: float = 1.0,
    jobs: int | None = None,
) -> StepPath:
    """t -> R(r t) / r."""
    traj = simulate_model(fam, r, stream, horizon=horizon, jobs=jobs)
    return scale_path(transfer_count_path(traj), r, r)


def fluid_deviation(path: StepPath, mu: float, horizon: float = 1.0) -> float:
    """sup_{t <= horizon} |path(t) - t / mu|, attained at a breakpoint from either side."""
    bp = path.breakpoints[path.breakpoints <= horizon]
    grid = np.concatenate((bp, [horizon]))
    right = np.abs(path.evaluate(grid) - grid / mu)
    left = np.abs(path.evaluate_left(grid) - grid / mu)
    return float(max(abs(path.value_at_zero), right.max(), left.max()))


@dataclass(frozen=True, slots=True)
class ScaledPrimitive:
    """Step part minus a linear centring: t -> step(t) - rate * t."""

    step: StepPath
    rate: float

    def __call__(self, t: float | ArrayLike) -> float | FloatArray:
        return self.evaluate(t)

    def evaluate(self, t: float | ArrayLike) -> float | FloatArray:
        times = np.asarray(t, dtype=np.float64)
        out = np.asarray(self.step.evaluate(times)) - self.rate * times
        return float(out) if np.ndim(t) == 0 else out

    def sup_abs(self, horizon: float = 1.0) -> float:
        """sup_{t <= horizon} |value|; extremes sit at breakpoints or the endpoints."""
        bp = self.step.breakpoints[self.step.breakpoints <= horizon]
        grid = np.concatenate(([0.0], bp, [horizon]))
        right = np.abs(self.step.evaluate(grid) - self.rate * grid)
        left = np.abs(self.step.evaluate_left(grid) - self.rate * grid)
        return float(max(right.max(), left.max()))


def scaled_primitives(
    fam: ModelFamily, r: float, stream: SeededStream, *, horizon: float = 1.0
) -> tuple[ScaledPrimitive, ScaledPrimitive]:
    """(U(rt) - r mu^r t) / a_r and (V(rt) - r nu t) / a_r over floor(r * horizon) jobs."""
    n = int(math.floor(r * horizon))
    inputs = simulate_inputs(fam.arrival(r), fam.service_spec, n, stream)
    U, V = primitive_paths(inputs)
    a = fam.norming(r)
    u_check = ScaledPrimitive(scale_path(U, a, r), r * fam.arrival_mean(r) / a)
    v_check = ScaledPrimitive(scale_path(V, a, r), r * fam.service_spec.mean / a)
    return u_check, v_check


# -- convergence sweeps ---------------------------------------------------------------


@dataclass(slots=True)
class SweepResult:
    """Samples of the scaled plateau at time t for each r, with stabilisation diagnostics."""

    t: float
    r_values: list[float]
    samples: dict[float, FloatArray] = field(default_factory=dict)

    def quantile_table(self, probs: Iterable[float] = SWEEP_PROBS) -> dict[float, list[float]]:
        probs = list(probs)
        return {r: quantiles(self.samples[r], probs).tolist() for r in self.r_values}

    def successive_ks(self) -> list[float]:
        return [
            ks_two_sample(self.samples[a], self.samples[b])
            for a, b in zip(self.r_values, self.r_values[1:])
        ]

    def is_stabilising(self) -> bool:
        distances = self.successive_ks()
        return all(b < a for a, b in zip(distances, distances[1:]))


def _sequential_map(fn: Callable[[T], Out], tasks: Sequence[T]) -> list[Out]:
    return [fn(task) for task in tasks]


def sample_scaled_plateau(task: tuple[ModelFamily, float, float, SeededStream]) -> float:
    fam, r, t, stream = task
    return float(scaled_plateau(fam, r, stream, horizon=t).evaluate(t))


def convergence_sweep(
    fam: ModelFamily,
    r_values: Sequence[float],
    replications: int,
    t: float,
    stream: SeededStream,
    *,
    mapper: Mapper | None = None,
) -> SweepResult:
    """Draw `replications` values of the scaled plateau at time t for each r."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    run = mapper or _sequential_map
    result = SweepResult(t=t, r_values=[float(r) for r in r_values])
    for r in result.r_values:
        level = stream.child(f"r={r:g}")
        tasks = [(fam, r, t, level.child(f"rep-{i}")) for i in range(replications)]
        result.samples[r] = np.asarray(run(sample_scaled_plateau, tasks), dtype=np.float64)
        logger.info(
            "Sampled scaled plateau",
            extra={
                "r": r,
                "replications": replications,
                "median": float(np.median(result.samples[r])),
            },
        )
    return result
