from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import interpolate, optimize

from plateau.limitlaw.constants import c_alpha, check_alpha, pareto_laplace_complement

logger = logging.getLogger(__name__)

FloatArray = NDArray[np.float64]

# brentq's floor on rtol
_RTOL = 4.0 * float(np.finfo(np.float64).eps)
_XTOL = 1e-300
_MAX_BRACKET_DOUBLINGS = 200


@dataclass(frozen=True, slots=True)
class LimitLawParams:
    """Tail index, its jump constant and numerical tolerances for the limit-law solvers."""

    alpha: float
    c: float = 0.0
    root_tol: float = 1e-12
    quad_tol: float = 1e-10

    def __post_init__(self) -> None:
        alpha = check_alpha(self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if self.c == 0.0:
            object.__setattr__(self, "c", c_alpha(alpha))
        elif not math.isclose(self.c, c_alpha(alpha), rel_tol=1e-12):
            raise ValueError(f"c={self.c} is inconsistent with alpha={alpha}")
        if self.root_tol <= 0 or self.quad_tol <= 0:
            raise ValueError("tolerances must be strictly positive")

    @classmethod
    def for_alpha(cls, alpha: float) -> LimitLawParams:
        return cls(alpha)


def beta_q(q: float, p: LimitLawParams) -> float:
    """Jump mass above q: c q^{-alpha} / alpha."""
    _check_q(q)
    return p.c * q ** (-p.alpha) / p.alpha


def psi_tilde(q: float, s: float, p: LimitLawParams) -> float:
    """
    s + s^alpha + c int_q^inf (1 - e^{-sx}) x^{-alpha-1} dx.

    With x = q t the integral is beta_q times 1 - E[exp(-s q T)], T unit Pareto(alpha).
    """

    _check_q(q)
    if s < 0:
        raise ValueError(f"s must be >= 0 (got {s})")
    if s == 0:
        return 0.0
    return s + s**p.alpha + beta_q(q, p) * pareto_laplace_complement(s * q, p.alpha)


def phi_q(q: float, lam: float, p: LimitLawParams) -> float:
    """Right inverse of s -> psi_tilde(q, s); psi_tilde(s) >= s brackets the root in [0, lam]."""
    _check_q(q)
    if lam < 0:
        raise ValueError(f"lambda must be >= 0 (got {lam})")
    if lam == 0:
        return 0.0
    return float(
        optimize.brentq(lambda s: psi_tilde(q, s, p) - lam, 0.0, lam, xtol=_XTOL, rtol=_RTOL)
    )


def kappa_residual(kappa_value: float, q: float | None, p: LimitLawParams) -> float:
    """q^{alpha-1} k + k^alpha - (c / alpha) E[exp(-k T)]; `q=None` drops the linear term."""
    linear = 0.0 if q is None else q ** (p.alpha - 1.0) * kappa_value
    laplace = 1.0 - pareto_laplace_complement(kappa_value, p.alpha)
    return linear + kappa_value**p.alpha - p.c / p.alpha * laplace


def kappa(q: float, p: LimitLawParams) -> float:
    """Unique positive root of the excursion-tail equation at level q."""
    _check_q(q)
    return _solve(q, p)


def kappa0(p: LimitLawParams) -> float:
    """The q -> 0 limit of kappa: k^alpha = (c / alpha) E[exp(-k T)]."""
    return _solve(None, p)


def h(q: float, p: LimitLawParams) -> float:
    """Excursion rate n(max jump > q) = kappa(q) / q."""
    return kappa(q, p) / q


def _solve(q: float | None, p: LimitLawParams) -> float:
    def g(k: float) -> float:
        return kappa_residual(k, q, p)

    upper = 1.0
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        if g(upper) > 0:
            break
        upper *= 2.0
    else:  # pragma: no cover - g grows like k^alpha
        raise ArithmeticError(f"could not bracket kappa root for q={q}")
    root = float(optimize.brentq(g, 0.0, upper, xtol=_XTOL, rtol=_RTOL))
    residual = abs(g(root))
    if residual > p.root_tol * max(1.0, p.c / p.alpha):
        logger.warning("kappa residual above tolerance", extra={"q": q, "residual": residual})
    return root


@dataclass(slots=True)
class KappaTable:
    """
    kappa on a log-spaced grid of q with monotone cubic interpolation of log kappa against log q.

    The grid is doubled in density until the interpolant reproduces direct solves at the
    interval midpoints within `rtol`. Queries outside [q_min, q_max] fall back to direct solves.
    """

    params: LimitLawParams
    q_min: float = 1e-4
    q_max: float = 1e5
    points: int = 64
    rtol: float = 1e-6
    max_points: int = 2049
    q_grid: FloatArray = field(init=False, repr=False)
    kappa_grid: FloatArray = field(init=False, repr=False)
    _interp: interpolate.PchipInterpolator = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not 0 < self.q_min < self.q_max:
            raise ValueError("KappaTable requires 0 < q_min < q_max")
        log_q = np.linspace(math.log(self.q_min), math.log(self.q_max), self.points)
        values = np.array([kappa(math.exp(u), self.params) for u in log_q])
        while True:
            mids = 0.5 * (log_q[1:] + log_q[:-1])
            direct = np.array([kappa(math.exp(u), self.params) for u in mids])
            interp = interpolate.PchipInterpolator(log_q, np.log(values))
            err = float(np.max(np.abs(np.exp(interp(mids)) / direct - 1.0)))
            merged_q = np.empty(log_q.size + mids.size)
            merged_q[0::2], merged_q[1::2] = log_q, mids
            merged_k = np.empty_like(merged_q)
            merged_k[0::2], merged_k[1::2] = values, direct
            log_q, values = merged_q, merged_k
            if err <= self.rtol or log_q.size >= self.max_points:
                break
        if err > self.rtol:
            logger.warning(
                "kappa table did not reach tolerance",
                extra={"points": log_q.size, "max_rel_err": err},
            )
        self.q_grid = np.exp(log_q)
        self.kappa_grid = values
        self._interp = interpolate.PchipInterpolator(log_q, np.log(values))
        logger.debug("kappa table built", extra={"points": log_q.size, "max_rel_err": err})

    def __call__(self, q: float | ArrayLike) -> float | FloatArray:
        qs = np.atleast_1d(np.asarray(q, dtype=np.float64))
        if np.any(qs <= 0):
            raise ValueError("q must be > 0")
        inside = (qs >= self.q_min) & (qs <= self.q_max)
        out = np.empty_like(qs)
        out[inside] = np.exp(self._interp(np.log(qs[inside])))
        for i in np.flatnonzero(~inside):
            out[i] = kappa(float(qs[i]), self.params)
        return float(out[0]) if np.ndim(q) == 0 else out

    def of_log(self, u: float) -> float:
        """kappa(e^u), the integrand of lambda in log-q coordinates."""
        q = math.exp(u)
        if self.q_min <= q <= self.q_max:
            return float(math.exp(self._interp(u)))
        return kappa(q, self.params)

    def monotonicity_violations(self) -> FloatArray:
        """Grid points q where kappa increases relative to the previous grid point."""
        up = np.diff(self.kappa_grid) > 0
        return self.q_grid[1:][up]


@lru_cache(maxsize=8)
def default_table(p: LimitLawParams) -> KappaTable:
    table = KappaTable(p)
    violations = table.monotonicity_violations()
    if violations.size:
        logger.warning(
            "kappa not monotone on grid",
            extra={"alpha": p.alpha, "count": int(violations.size), "first_q": float(violations[0])},
        )
    return table


def _check_q(q: float) -> None:
    if not q > 0:
        raise ValueError(f"q must be > 0 (got {q})")
