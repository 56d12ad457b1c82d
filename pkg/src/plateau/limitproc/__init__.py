from .export import EXCURSION_COLUMNS, PATH_COLUMNS, excursion_frame, path_frame
from .levy import (
    DEFAULT_EPS,
    JumpDriftPath,
    compensation_drift,
    extend,
    simulate_X,
    simulate_X_until,
    truncation_variance,
)
from .reflection import (
    ExcursionRecord,
    PlateauLimitPath,
    ReflectedPath,
    M_star_path,
    Z_from_excursions,
    Z_of_v,
    excursion_decompose,
    excursion_levels_sup,
    inverse_local_time,
    max_jump_rate,
    reflect_local_time,
)

__all__ = [
    "DEFAULT_EPS",
    "EXCURSION_COLUMNS",
    "ExcursionRecord",
    "JumpDriftPath",
    "M_star_path",
    "PATH_COLUMNS",
    "PlateauLimitPath",
    "ReflectedPath",
    "Z_from_excursions",
    "Z_of_v",
    "compensation_drift",
    "excursion_decompose",
    "excursion_frame",
    "excursion_levels_sup",
    "extend",
    "inverse_local_time",
    "max_jump_rate",
    "path_frame",
    "reflect_local_time",
    "simulate_X",
    "simulate_X_until",
    "truncation_variance",
]
