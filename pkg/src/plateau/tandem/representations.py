"""Independent routes to the idleness, transfer counts and queue-2 sojourn times."""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray

from plateau.paths import StepPath, idle_H, plateau_F
from plateau.tandem.trajectory import TandemInputs, TandemTrajectory

FloatArray = NDArray[np.float64]


def primitive_paths(inputs: TandemInputs) -> tuple[StepPath, StepPath]:
    """U(t) = U_{floor(t)} and V(t) = V_{floor(t)} as step paths."""
    return StepPath.from_counts(np.cumsum(inputs.u)), StepPath.from_counts(np.cumsum(inputs.v))


# -- idleness -------------------------------------------------------------------------


def idleness_closed_form_all(inputs: TandemInputs) -> FloatArray:
    """I_n = u_1 + max_{k<=n} sum_{j=2..k} (u_j - v_{j-1}) for every n."""
    if inputs.n == 0:
        return np.empty(0)
    increments = inputs.u[1:] - inputs.v[:-1]
    partial = np.concatenate(([0.0], np.cumsum(increments)))
    return inputs.u[0] + np.maximum.accumulate(partial)


def idleness_closed_form(inputs: TandemInputs, n: int) -> float:
    inputs.check_index(n)
    increments = inputs.u[1:n] - inputs.v[: n - 1]
    partial = np.concatenate(([0.0], np.cumsum(increments)))
    return float(inputs.u[0] + partial.max())


def idleness_via_H_all(inputs: TandemInputs) -> FloatArray:
    U, V = primitive_paths(inputs)
    return idle_H(U, V, 1.0).evaluate(np.arange(1, inputs.n + 1, dtype=np.float64))


def idleness_via_H(inputs: TandemInputs, n: int) -> float:
    """I_n = H(U, V, 1)(n)."""
    inputs.check_index(n)
    U, V = primitive_paths(inputs)
    return float(idle_H(U, V, 1.0).evaluate(float(n)))


# -- transfers ------------------------------------------------------------------------


def arrivals_Q2(traj: TandemTrajectory, t: ArrayLike) -> NDArray[np.intp]:
    """R(t) = sup{n >= 0 : D_n <= t}."""
    return traj.R(t)


def arrivals_Q2_via_H(traj: TandemTrajectory, t: ArrayLike) -> NDArray[np.intp]:
    """R(t) = max{m >= 0 : V(m) + H(U, V, 1)(m) <= t}."""
    times = np.asarray(t, dtype=np.float64)
    if np.any(times < 0):
        raise ValueError("time must be >= 0")
    reach = traj.V + idleness_via_H_all(traj.inputs)
    return np.searchsorted(reach, times, side="right")


# -- queue-2 sojourn times ------------------------------------------------------------


def sojourn_lindley(inputs: TandemInputs) -> FloatArray:
    """M_1 = v_1, M_{n+1} = v_{n+1} + [M_n - d_{n+1}]^+ with d_{n+1} = v_{n+1} + I_{n+1} - I_n."""
    I = idleness_closed_form_all(inputs)
    v = inputs.v
    M = np.empty(inputs.n)
    for i in range(inputs.n):
        if i == 0:
            M[i] = v[0]
            continue
        d = v[i] + (I[i] - I[i - 1])
        M[i] = v[i] + max(0.0, M[i - 1] - d)
    return M


def sojourn_maxformula(inputs: TandemInputs) -> FloatArray:
    """M_n = max_{k<=n}(v_k + I_k) - I_n."""
    I = idleness_closed_form_all(inputs)
    return np.maximum.accumulate(inputs.v + I) - I


def sojourn_functional(inputs: TandemInputs) -> FloatArray:
    """M_n = F(U, V, 1)(n)."""
    U, V = primitive_paths(inputs)
    return plateau_F(U, V, 1.0).evaluate(np.arange(1, inputs.n + 1, dtype=np.float64))


def plateau_path(traj: TandemTrajectory) -> StepPath:
    """M(t) = M_{R(t)}: breakpoints at transfer times, zero before the first transfer."""
    return StepPath.from_points(traj.D, traj.M, 0.0)
