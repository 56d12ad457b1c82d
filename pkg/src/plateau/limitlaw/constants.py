"""Stable-jump normalising constant and Laplace transforms of the unit Pareto law."""

from __future__ import annotations

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import integrate, special

logger = logging.getLogger(__name__)

VALIDATION_POINTS = (0.5, 1.0, 2.0)
VALIDATION_RTOL = 1e-8
SERIES_MAX_TERMS = 200


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must lie in (1, 2) (got {alpha})")
    return alpha


def levy_integral(s: float, alpha: float) -> float:
    """
    Quadrature of int_0^inf (e^{-sx} - 1 + sx) x^{-1-alpha} dx.

    [0, 1] uses the algebraic weight x^{1-alpha} against the smooth factor
    (e^{-sx} - 1 + sx) / x^2; on [1, inf) the linear part is integrated in closed form.
    """

    alpha = check_alpha(alpha)
    if s < 0:
        raise ValueError(f"s must be >= 0 (got {s})")
    if s == 0:
        return 0.0

    def smooth(x: float) -> float:
        sx = s * x
        if sx < 1e-4:
            return s * s * (0.5 - sx / 6.0 + sx * sx / 24.0)
        return (math.expm1(-sx) + sx) / (x * x)

    head, _ = integrate.quad(smooth, 0.0, 1.0, weight="alg", wvar=(1.0 - alpha, 0.0))
    exp_tail, _ = integrate.quad(lambda x: math.exp(-s * x) * x ** (-1.0 - alpha), 1.0, np.inf)
    linear_tail = s / (alpha - 1.0) - 1.0 / alpha
    return head + exp_tail + linear_tail


@lru_cache(maxsize=64)
def c_alpha(alpha: float, *, validate: bool = True) -> float:
    """
    The constant c with c * int_0^inf (e^{-sx} - 1 + sx) x^{-1-alpha} dx = s^alpha.

    Closed form alpha (alpha - 1) / Gamma(2 - alpha) (= 1 / Gamma(-alpha)), checked against
    quadrature at a few values of s before it is returned.
    """

    alpha = check_alpha(alpha)
    closed = alpha * (alpha - 1.0) / special.gamma(2.0 - alpha)
    if validate:
        for s in VALIDATION_POINTS:
            target = s**alpha
            got = closed * levy_integral(s, alpha)
            if abs(got - target) > VALIDATION_RTOL * target:
                raise ArithmeticError(
                    f"closed-form c_alpha failed quadrature check at s={s}: {got} != {target}"
                )
    logger.debug("c_alpha", extra={"alpha": alpha, "c_alpha": closed})
    return float(closed)


def pareto_laplace(kappa: float, alpha: float) -> float:
    """E[exp(-kappa T)] for T Pareto on [1, inf) with index alpha."""
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0 (got {kappa})")
    if kappa == 0:
        return 1.0
    if kappa < 1.0:
        # w = 1/t
        value, _ = integrate.quad(
            lambda w: math.exp(-kappa / w) * w ** (alpha - 1.0) if w > 0 else 0.0,
            0.0,
            1.0,
            epsabs=0.0,
            epsrel=1e-12,
            limit=200,
        )
        return alpha * value
    # t = 1 + y / kappa
    value, _ = integrate.quad(
        lambda y: math.exp(-y) * (1.0 + y / kappa) ** (-alpha - 1.0),
        0.0,
        np.inf,
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    return alpha * math.exp(-kappa) / kappa * value


def pareto_laplace_complement(kappa: float, alpha: float) -> float:
    """1 - E[exp(-kappa T)], accurate for small kappa."""
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0 (got {kappa})")
    if kappa == 0:
        return 0.0
    if kappa >= 1.0:
        return 1.0 - pareto_laplace(kappa, alpha)
    value, _ = integrate.quad(
        lambda w: -math.expm1(-kappa / w) * w ** (alpha - 1.0) if w > 0 else 0.0,
        0.0,
        1.0,
        epsabs=0.0,
        epsrel=1e-12,
        limit=200,
    )
    return alpha * value


def pareto_laplace_series(kappa: float, alpha: float) -> float:
    """alpha kappa^alpha Gamma(-alpha) + alpha sum_n (-kappa)^n / (n! (alpha - n)); small kappa only."""
    alpha = check_alpha(alpha)
    if kappa < 0:
        raise ValueError(f"kappa must be >= 0 (got {kappa})")
    total = alpha * kappa**alpha * special.gamma(-alpha)
    term = 1.0
    for n in range(SERIES_MAX_TERMS):
        if n:
            term *= -kappa / n
        contribution = alpha * term / (alpha - n)
        total += contribution
        if n > kappa and abs(contribution) < 1e-17:
            break
    return float(total)
