"""The `scale-sweep` command: scaled plateau samples across a heavy-traffic family."""

from __future__ import annotations

import logging
from functools import partial
from pathlib import Path

import numpy as np
import pandas as pd

from plateau.config import Settings
from plateau.experiments.pool import map_replications
from plateau.experiments.runner import CommandResult
from plateau.randomgen import SeededStream, parse_dist_spec
from plateau.scaling import HeavyTrafficFamily, convergence_sweep

logger = logging.getLogger(__name__)


def sample_csv_name(r: float) -> str:
    return f"scaled_plateau_r{r:g}.csv"


def run_scale_sweep(settings: Settings, run_dir: Path) -> CommandResult:
    cfg = settings.sweep
    family = HeavyTrafficFamily(
        alpha=cfg.alpha,
        gamma=cfg.gamma,
        service=parse_dist_spec(cfg.service),
        base_arrival=parse_dist_spec(cfg.arrival),
    )
    mapper = partial(map_replications, workers=settings.workers, desc="scale-sweep")
    result = convergence_sweep(
        family,
        cfg.r_values,
        cfg.replications,
        cfg.t,
        SeededStream(settings.seed).child("scale-sweep"),
        mapper=mapper,
    )

    for r in result.r_values:
        pd.DataFrame(
            {"replication": np.arange(cfg.replications), "M": result.samples[r]},
            columns=["replication", "M"],
        ).to_csv(run_dir / sample_csv_name(r), index=False)

    distances = result.successive_ks()
    stabilising = result.is_stabilising()
    if not stabilising:
        logger.warning("Successive KS distances are not decreasing", extra={"ks": distances})
    report = {
        "family": {
            f"{r:g}": {
                "a_r": family.norming(r),
                "mu_r": family.arrival_mean(r),
                "gamma_identity": r / family.norming(r) * (1.0 - family.rho(r)),
            }
            for r in result.r_values
        },
        "quantiles": {f"{r:g}": q for r, q in result.quantile_table().items()},
        "successive_ks": distances,
        "stabilising": stabilising,
    }
    return CommandResult(report)
