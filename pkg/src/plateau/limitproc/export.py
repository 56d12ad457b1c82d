from __future__ import annotations

from typing import Sequence

import numpy as np
import pandas as pd

from plateau.limitproc.reflection import ExcursionRecord, ReflectedPath

PATH_COLUMNS = ["t", "X", "Y", "L"]
EXCURSION_COLUMNS = ["u", "start", "end", "lifetime", "max_jump", "censored"]


def path_frame(reflected: ReflectedPath) -> pd.DataFrame:
    """X, Y, L at time 0, every jump time (post-jump values) and the horizon."""
    times = np.concatenate(([0.0], reflected.path.jump_times, [reflected.horizon]))
    times = np.unique(times)
    return pd.DataFrame(
        {
            "t": times,
            "X": reflected.X(times),
            "Y": reflected.Y(times),
            "L": reflected.L(times),
        },
        columns=PATH_COLUMNS,
    )


def excursion_frame(excursions: Sequence[ExcursionRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {
                "u": e.level,
                "start": e.start,
                "end": e.end,
                "lifetime": e.lifetime,
                "max_jump": e.max_jump,
                "censored": e.censored,
            }
            for e in excursions
        ],
        columns=EXCURSION_COLUMNS,
    )
