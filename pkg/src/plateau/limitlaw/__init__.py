from .constants import (
    c_alpha,
    levy_integral,
    pareto_laplace,
    pareto_laplace_complement,
    pareto_laplace_series,
)
from .kappa import (
    KappaTable,
    LimitLawParams,
    beta_q,
    default_table,
    h,
    kappa,
    kappa0,
    kappa_residual,
    phi_q,
    psi_tilde,
)
from .law import F_v, lambda_vy, limit_cdf

__all__ = [
    "F_v",
    "KappaTable",
    "LimitLawParams",
    "beta_q",
    "c_alpha",
    "default_table",
    "h",
    "kappa",
    "kappa0",
    "kappa_residual",
    "lambda_vy",
    "levy_integral",
    "limit_cdf",
    "pareto_laplace",
    "pareto_laplace_complement",
    "pareto_laplace_series",
    "phi_q",
    "psi_tilde",
]
