from .family import FixedFamily, HeavyTrafficFamily, ModelFamily
from .scaled import (
    ScaledPrimitive,
    SweepResult,
    convergence_sweep,
    fluid_deviation,
    fluid_R,
    jobs_for_horizon,
    sample_scaled_plateau,
    scaled_plateau,
    scaled_primitives,
    simulate_model,
    transfer_count_path,
)

__all__ = [
    "FixedFamily",
    "HeavyTrafficFamily",
    "ModelFamily",
    "ScaledPrimitive",
    "SweepResult",
    "convergence_sweep",
    "fluid_R",
    "fluid_deviation",
    "jobs_for_horizon",
    "sample_scaled_plateau",
    "scaled_plateau",
    "scaled_primitives",
    "simulate_model",
    "transfer_count_path",
]
