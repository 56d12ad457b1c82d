"""The `limit-law` and `compare` commands."""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from plateau.config import Settings
from plateau.errors import AcceptanceFailure, ConfigError
from plateau.experiments.limit import ks_against_law
from plateau.experiments.runner import CommandResult
from plateau.limitlaw import (
    F_v,
    KappaTable,
    LimitLawParams,
    beta_q,
    default_table,
    kappa,
    kappa0,
    kappa_residual,
    lambda_vy,
    phi_q,
)

logger = logging.getLogger(__name__)

KAPPA_CSV = "kappa.csv"
LAW_CSV = "law.csv"
TAIL_RANGE = (1e2, 1e4)


def kappa_frame(params: LimitLawParams, q_grid: np.ndarray) -> pd.DataFrame:
    rows = []
    for q in q_grid:
        k = kappa(float(q), params)
        via_phi = float(q) * phi_q(float(q), beta_q(float(q), params), params)
        rows.append(
            {
                "q": float(q),
                "kappa": k,
                "h": k / float(q),
                "residual": kappa_residual(k, float(q), params),
                "kappa_via_phi": via_phi,
            }
        )
    return pd.DataFrame(rows, columns=["q", "kappa", "h", "residual", "kappa_via_phi"])


def tail_slope(frame: pd.DataFrame, lo: float = TAIL_RANGE[0], hi: float = TAIL_RANGE[1]) -> float:
    """Least-squares slope of log kappa against log q over [lo, hi]."""
    tail = frame[(frame["q"] >= lo) & (frame["q"] <= hi)]
    if len(tail) < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(tail["q"]), np.log(tail["kappa"]), 1)
    return float(slope)


def _lambda_entry(v: float, y: float, params: LimitLawParams, table: KappaTable) -> float:
    if v == 0:
        return 0.0
    return lambda_vy(v, y, params, table) if y > 0 else float("inf")


def run_limit_law(settings: Settings, run_dir: Path) -> CommandResult:
    cfg = settings.law
    if cfg.q_min >= cfg.q_max:
        raise ConfigError("law.q_min must be below law.q_max")
    params = LimitLawParams(cfg.alpha, root_tol=cfg.tol)
    q_grid = np.geomspace(cfg.q_min, cfg.q_max, cfg.q_points)
    kappas = kappa_frame(params, q_grid)
    kappas.to_csv(run_dir / KAPPA_CSV, index=False)

    table = default_table(params)
    law_rows = [
        {
            "v": v,
            "y": y,
            "lambda": _lambda_entry(v, y, params, table),
            "F_v": F_v(v, y, params, table),
        }
        for v in cfg.v_values
        for y in cfg.y_grid
    ]
    pd.DataFrame(law_rows, columns=["v", "y", "lambda", "F_v"]).to_csv(
        run_dir / LAW_CSV, index=False
    )

    increases = int(np.sum(np.diff(kappas["kappa"].to_numpy()) > 0))
    if increases:
        logger.warning("kappa increases on the q grid", extra={"increases": increases})
    two_route = np.abs(kappas["kappa_via_phi"] / kappas["kappa"] - 1.0)
    report: dict[str, Any] = {
        "alpha": params.alpha,
        "c_alpha": params.c,
        "kappa0": kappa0(params),
        "max_residual": float(np.max(np.abs(kappas["residual"]))),
        "max_two_route_rel_diff": float(two_route.max()),
        "tail_slope": tail_slope(kappas),
        "expected_tail_slope": 1.0 - params.alpha,
        "monotonicity_violations": increases,
    }
    return CommandResult(report)


def run_compare(settings: Settings, run_dir: Path) -> CommandResult:
    cfg = settings.compare
    if cfg.sample_csv is None:
        raise ConfigError("compare needs a Z-sample CSV (compare.sample_csv or --sample-csv)")
    try:
        frame = pd.read_csv(cfg.sample_csv)
    except FileNotFoundError as exc:
        raise ConfigError(f"Sample CSV not found: {cfg.sample_csv}") from exc
    missing = {"v", "Z"} - set(frame.columns)
    if missing:
        raise ConfigError(f"Sample CSV {cfg.sample_csv} lacks columns {sorted(missing)}")
    if frame.empty:
        raise ConfigError(f"Sample CSV {cfg.sample_csv} has no rows")

    z_by_v = {
        float(v): group["Z"].to_numpy(dtype=np.float64)
        for v, group in frame.groupby("v", sort=True)
    }
    entries, _, failing = ks_against_law(z_by_v, LimitLawParams(cfg.alpha), cfg.threshold)
    report = {"sample_csv": str(cfg.sample_csv), "ks": entries, "passed": not failing}
    failure = None
    if failing:
        failure = AcceptanceFailure(
            f"KS distance above {cfg.threshold} for v in {[f'{v:g}' for v in failing]}"
        )
    return CommandResult(report, failure)
