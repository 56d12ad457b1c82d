from __future__ import annotations

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike

from plateau.tandem.trajectory import TandemTrajectory

JOB_COLUMNS = ["n", "u", "v", "U", "V", "I", "D", "M"]
CONTINUOUS_COLUMNS = ["t", "W1", "W2", "M"]


def trajectory_frame(traj: TandemTrajectory) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "n": np.arange(1, traj.n + 1),
            "u": traj.inputs.u,
            "v": traj.inputs.v,
            "U": traj.U,
            "V": traj.V,
            "I": traj.I,
            "D": traj.D,
            "M": traj.M,
        },
        columns=JOB_COLUMNS,
    )


def continuous_frame(
    traj: TandemTrajectory, uniform_grid: ArrayLike | None = None
) -> pd.DataFrame:
    """W1, W2 and M on the merged event grid, optionally merged with extra times."""
    times = traj.event_times() if traj.n else np.empty(0)
    if uniform_grid is not None:
        times = np.union1d(times, np.asarray(uniform_grid, dtype=np.float64))
    return pd.DataFrame(
        {
            "t": times,
            "W1": traj.W1(times),
            "W2": traj.W2(times),
            "M": traj.M_at(times),
        },
        columns=CONTINUOUS_COLUMNS,
    )
