from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from plateau.randomgen import DistSpec, SeededStream, sample

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]


@dataclass(frozen=True, slots=True)
class TandemInputs:
    """Interarrival times u_i >= 0 and service times v_i > 0 of the first n jobs."""

    u: FloatArray
    v: FloatArray

    def __post_init__(self) -> None:
        u = np.array(self.u, dtype=np.float64).ravel()
        v = np.array(self.v, dtype=np.float64).ravel()
        if u.shape != v.shape:
            raise ValueError(f"u and v must have the same length ({u.size} != {v.size})")
        if np.any(u < 0) or not np.all(np.isfinite(u)):
            raise ValueError("interarrival times must be finite and >= 0")
        if np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise ValueError("service times must be finite and > 0")
        u.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def of(cls, u: ArrayLike, v: ArrayLike) -> TandemInputs:
        return cls(np.asarray(u, dtype=np.float64), np.asarray(v, dtype=np.float64))

    @property
    def n(self) -> int:
        return int(self.u.size)

    def check_index(self, n: int) -> None:
        if not 1 <= n <= self.n:
            raise ValueError(f"job index must lie in [1, {self.n}], got {n}")


@dataclass(frozen=True, slots=True)
class TandemTrajectory:
    """
    Per-job arrays of the tandem queue (index i-1 holds job i) plus continuous-time accessors.

    U, V: cumulative interarrival and service sums; I: first-server idleness at arrivals;
    D = V + I: transfer times; M: sojourn times in queue 2; C = D + M: queue-2 completions.
    """

    inputs: TandemInputs
    U: FloatArray
    V: FloatArray
    I: FloatArray
    D: FloatArray
    M: FloatArray
    C: FloatArray

    @property
    def n(self) -> int:
        return self.inputs.n

    # -- counting processes -------------------------------------------------------------

    def E(self, t: ArrayLike) -> NDArray[np.intp]:
        """Number of exogenous arrivals by time t."""
        return np.searchsorted(self.U, _times(t), side="right")

    def R(self, t: ArrayLike) -> NDArray[np.intp]:
        """Number of transfers to queue 2 by time t."""
        return np.searchsorted(self.D, _times(t), side="right")

    # -- workloads and idleness ---------------------------------------------------------

    def I_at(self, t: ArrayLike) -> FloatArray:
        times = _times(t)
        k = self.E(times)
        return _at(self.I, k) + np.maximum(0.0, times - _at(self.D, k))

    def J_at(self, t: ArrayLike) -> FloatArray:
        times = _times(t)
        return self.W2(times) - _at(self.V, self.R(times)) + times

    def W1(self, t: ArrayLike) -> FloatArray:
        times = _times(t)
        return np.maximum(0.0, _at(self.D, self.E(times)) - times)

    def W2(self, t: ArrayLike) -> FloatArray:
        times = _times(t)
        k = self.R(times)
        return np.maximum(0.0, _at(self.M, k) - (times - _at(self.D, k)))

    def M_at(self, t: ArrayLike) -> FloatArray:
        """Plateau process M(t) = M_{R(t)}, with M_0 = 0."""
        return _at(self.M, self.R(_times(t)))

    def workload_before_transfer(self) -> FloatArray:
        """W2(D_n-), the Lindley bracket [M_{n-1} - d_n]^+ (zero for n = 1)."""
        previous = np.concatenate(([0.0], self.C[:-1]))
        return np.maximum(0.0, previous - self.D)

    def empty_on_arrival(self) -> NDArray[np.bool_]:
        return self.workload_before_transfer() == 0.0

    def event_times(self) -> FloatArray:
        return np.unique(np.concatenate(([0.0], self.U, self.D, self.C)))

    def record_jobs(self) -> NDArray[np.bool_]:
        """
        Jobs whose service time beats every earlier one in the same queue-1 busy period.

        These are the candidates for upward plateau moves; the flag is descriptive only.
        """

        flags = np.zeros(self.n, dtype=bool)
        previous_departure = 0.0
        best = -np.inf
        for i in range(self.n):
            if self.U[i] >= previous_departure:
                best = -np.inf
            if self.inputs.v[i] > best:
                flags[i] = True
                best = self.inputs.v[i]
            previous_departure = self.D[i]
        return flags


def build_trajectory(inputs: TandemInputs, *, vectorized: bool = False) -> TandemTrajectory:
    """
    Simulate both FIFO queues job by job.

    The default path is an event pass: server 1 accumulates idleness whenever an arrival
    finds it free, and each transfer meets the queue-2 backlog left by the previous job.
    `vectorized=True` computes the same quantities through running maxima and is used for
    large replicated sweeps.
    """

    u, v = inputs.u, inputs.v
    U = np.cumsum(u)
    V = np.cumsum(v)
    if vectorized:
        I, M = _vectorized_pass(U, V, v)
    else:
        I, M = _event_pass(U, V, v)
    D = V + I
    C = D + M
    for arr in (U, V, I, D, M, C):
        arr.setflags(write=False)
    logger.debug("Built tandem trajectory", extra={"jobs": inputs.n, "vectorized": vectorized})
    return TandemTrajectory(inputs=inputs, U=U, V=V, I=I, D=D, M=M, C=C)


def simulate_inputs(
    arrival: DistSpec, service: DistSpec, n: int, stream: SeededStream
) -> TandemInputs:
    """Draw n interarrival and service times from independent substreams."""
    u = sample(arrival, stream.child("arrivals"), n)
    v = sample(service, stream.child("services"), n)
    return TandemInputs(u, v)


def _event_pass(U: FloatArray, V: FloatArray, v: FloatArray) -> tuple[FloatArray, FloatArray]:
    n = U.size
    I = np.empty(n)
    M = np.empty(n)
    idle = 0.0
    last_transfer = 0.0
    last_completion = 0.0
    for i in range(n):
        # Arrival first on ties: an arrival at the departure instant finds the server free.
        if U[i] > last_transfer:
            idle += U[i] - last_transfer
        I[i] = idle
        transfer = V[i] + idle
        M[i] = v[i] + max(0.0, last_completion - transfer)
        last_transfer = transfer
        last_completion = transfer + M[i]
    return I, M


def _vectorized_pass(
    U: FloatArray, V: FloatArray, v: FloatArray
) -> tuple[FloatArray, FloatArray]:
    if U.size == 0:
        return np.empty(0), np.empty(0)
    V_prev = np.concatenate(([0.0], V[:-1]))
    I = np.maximum.accumulate(U - V_prev)
    # C_n - D_n = max_{k<=n}(v_k + I_k) - I_n; keep M_n = v_n bit-exact when job n sets the max.
    reach = v + I
    best = np.maximum.accumulate(reach)
    M = np.where(best == reach, v, best - I)
    return I, M


def _times(t: ArrayLike) -> FloatArray:
    times = np.asarray(t, dtype=np.float64)
    if np.any(times < 0):
        raise ValueError("time must be >= 0")
    return times


def _at(values: FloatArray, k: NDArray[np.intp]) -> FloatArray:
    """values[k-1] with the convention values[-1 -> job 0] = 0."""
    padded = np.concatenate(([0.0], values))
    return padded[k]
