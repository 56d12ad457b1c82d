from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from plateau.paths.step import StepPath


def path_to_frame(p: StepPath, value_column: str = "value") -> pd.DataFrame:
    """(t, value) rows: value_at_zero at t=0 followed by the breakpoint/value pairs."""
    return pd.DataFrame(
        {
            "t": np.concatenate(([0.0], p.breakpoints)),
            value_column: np.concatenate(([p.value_at_zero], p.values)),
        }
    )


def path_from_frame(frame: pd.DataFrame, value_column: str = "value") -> StepPath:
    times = frame["t"].to_numpy(dtype=np.float64)
    values = frame[value_column].to_numpy(dtype=np.float64)
    if times.size == 0 or times[0] != 0.0:
        raise ValueError("path CSV must start with a row at t=0")
    return StepPath(times[1:], values[1:], float(values[0]))


def write_path_csv(p: StepPath, path: Path) -> None:
    path_to_frame(p).to_csv(path, index=False)


def read_path_csv(path: Path) -> StepPath:
    return path_from_frame(pd.read_csv(path))


def path_to_json(p: StepPath) -> dict[str, Any]:
    return {
        "breakpoints": p.breakpoints.tolist(),
        "values": p.values.tolist(),
        "v0": p.value_at_zero,
    }


def path_from_json(payload: dict[str, Any] | str) -> StepPath:
    data = json.loads(payload) if isinstance(payload, str) else payload
    return StepPath(
        np.asarray(data.get("breakpoints", []), dtype=np.float64),
        np.asarray(data.get("values", []), dtype=np.float64),
        float(data.get("v0", 0.0)),
    )
