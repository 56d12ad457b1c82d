from .functionals import (
    idle_H,
    plateau_F,
    plateau_F_bruteforce,
    running_sup,
    scale_path,
    translate_G,
)
from .io import (
    path_from_frame,
    path_from_json,
    path_to_frame,
    path_to_json,
    read_path_csv,
    write_path_csv,
)
from .step import StepPath, evaluate, evaluate_left, merge_grids, sum_paths

__all__ = [
    "StepPath",
    "evaluate",
    "evaluate_left",
    "idle_H",
    "merge_grids",
    "path_from_frame",
    "path_from_json",
    "path_to_frame",
    "path_to_json",
    "plateau_F",
    "plateau_F_bruteforce",
    "read_path_csv",
    "running_sup",
    "scale_path",
    "sum_paths",
    "translate_G",
    "write_path_csv",
]
