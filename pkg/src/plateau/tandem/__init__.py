from .export import CONTINUOUS_COLUMNS, JOB_COLUMNS, continuous_frame, trajectory_frame
from .representations import (
    arrivals_Q2,
    arrivals_Q2_via_H,
    idleness_closed_form,
    idleness_closed_form_all,
    idleness_via_H,
    idleness_via_H_all,
    plateau_path,
    primitive_paths,
    sojourn_functional,
    sojourn_lindley,
    sojourn_maxformula,
)
from .trajectory import TandemInputs, TandemTrajectory, build_trajectory, simulate_inputs

__all__ = [
    "CONTINUOUS_COLUMNS",
    "JOB_COLUMNS",
    "TandemInputs",
    "TandemTrajectory",
    "arrivals_Q2",
    "arrivals_Q2_via_H",
    "build_trajectory",
    "continuous_frame",
    "idleness_closed_form",
    "idleness_closed_form_all",
    "idleness_via_H",
    "idleness_via_H_all",
    "plateau_path",
    "primitive_paths",
    "simulate_inputs",
    "sojourn_functional",
    "sojourn_lindley",
    "sojourn_maxformula",
    "trajectory_frame",
]
