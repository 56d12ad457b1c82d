from .empirical import (
    EmpiricalSample,
    ecdf,
    hill_estimator,
    ks_critical_value,
    ks_distance,
    ks_two_sample,
    quantiles,
)

__all__ = [
    "EmpiricalSample",
    "ecdf",
    "hill_estimator",
    "ks_critical_value",
    "ks_distance",
    "ks_two_sample",
    "quantiles",
]
