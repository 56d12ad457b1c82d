from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from plateau.limitlaw.kappa import KappaTable, LimitLawParams, default_table

FloatArray = NDArray[np.float64]


def lambda_vy(v: float, y: float, p: LimitLawParams, table: KappaTable | None = None) -> float:
    """
    int_y^{y+v} kappa(q) / q dq.

    Integrated in u = log q, where the integrand becomes kappa(e^u) read from the cached table.
    """

    if v < 0:
        raise ValueError(f"v must be >= 0 (got {v})")
    if y <= 0:
        raise ValueError(f"y must be > 0 for lambda (got {y}); the integral diverges at 0")
    if v == 0:
        return 0.0
    table = table or default_table(p)
    value, _ = integrate.quad(
        table.of_log,
        math.log(y),
        math.log(y + v),
        epsabs=p.quad_tol,
        epsrel=1e-10,
        limit=200,
    )
    return float(value)


def F_v(v: float, y: float, p: LimitLawParams, table: KappaTable | None = None) -> float:
    """P(Z(v) <= y) = exp(-lambda(v, y)); 1 at v = 0 and 0 at y = 0 < v."""
    if v < 0 or y < 0:
        raise ValueError(f"F_v requires v >= 0 and y >= 0 (got v={v}, y={y})")
    if v == 0:
        return 1.0
    if y == 0:
        return 0.0
    return math.exp(-lambda_vy(v, y, p, table))


def limit_cdf(
    v: float, p: LimitLawParams, table: KappaTable | None = None
) -> Callable[[ArrayLike], FloatArray]:
    """Vectorised y -> F_v(y), zero for y < 0."""
    table = table or default_table(p)

    def cdf(y: ArrayLike) -> FloatArray:
        ys = np.atleast_1d(np.asarray(y, dtype=np.float64))
        out = np.zeros(ys.shape)
        for i, value in enumerate(ys):
            if value >= 0:
                out[i] = F_v(v, float(value), p, table)
        return out

    return cdf
