"""The `limit-sim` and `limit-compare` commands: Z(v) samples from exact limit paths."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import partial
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from plateau.config import LimitConfig, Settings
from plateau.errors import AcceptanceFailure
from plateau.experiments.pool import map_replications
from plateau.experiments.runner import CommandResult
from plateau.limitlaw import LimitLawParams, c_alpha, default_table, h, limit_cdf
from plateau.limitproc import (
    JumpDriftPath,
    ReflectedPath,
    excursion_frame,
    excursion_levels_sup,
    path_frame,
    simulate_X,
    simulate_X_until,
    truncation_variance,
)
from plateau.randomgen import SeededStream
from plateau.stats import ecdf, ks_critical_value, ks_distance, ks_two_sample, quantiles

logger = logging.getLogger(__name__)

Z_SAMPLES_CSV = "z_samples.csv"
LAW_TABLE_CSV = "law_vs_empirical.csv"
RATE_LEVELS = (0.5, 1.0, 2.0)
SUMMARY_PROBS = (0.1, 0.25, 0.5, 0.75, 0.9)


@dataclass(frozen=True)
class PathTask:
    alpha: float
    eps: float
    v_values: tuple[float, ...]
    horizon: float | None
    seed: int
    label: str


@dataclass(frozen=True)
class PathSample:
    z: tuple[float, ...]
    reindexed: tuple[float, ...]
    local_time: float
    jumps: int
    horizon: float
    rate_counts: tuple[int, ...]


def path_stream(seed: int, index: int) -> SeededStream:
    return SeededStream(seed).child("limit").child(f"path-{index}")


def simulate_path(task: PathTask) -> JumpDriftPath:
    stream = SeededStream(task.seed, task.label)
    v_max = max(task.v_values, default=0.0)
    if task.horizon is not None:
        return simulate_X(task.alpha, task.horizon, task.eps, stream)
    return simulate_X_until(task.alpha, v_max, task.eps, stream)


def sample_path(task: PathTask) -> PathSample:
    reflected = ReflectedPath(simulate_path(task))
    z = np.atleast_1d(reflected.Z(np.asarray(task.v_values))) if task.v_values else []
    excursions = reflected.excursions()
    return PathSample(
        z=tuple(float(value) for value in z),
        reindexed=tuple(excursion_levels_sup(excursions, v) for v in task.v_values),
        local_time=reflected.local_time_total,
        jumps=reflected.path.jump_count,
        horizon=reflected.horizon,
        rate_counts=tuple(
            sum(1 for e in excursions if e.max_jump > q and not e.censored) for q in RATE_LEVELS
        ),
    )


def _tasks(cfg: LimitConfig, seed: int) -> list[PathTask]:
    return [
        PathTask(
            alpha=cfg.alpha,
            eps=cfg.eps,
            v_values=tuple(cfg.v_values),
            horizon=cfg.horizon,
            seed=seed,
            label=path_stream(seed, i).label,
        )
        for i in range(cfg.paths)
    ]


def collect_samples(settings: Settings, run_dir: Path) -> tuple[list[PathSample], pd.DataFrame]:
    """Simulate all paths, write the Z-sample CSV and export the first few paths in full."""
    cfg = settings.limit
    tasks = _tasks(cfg, settings.seed)
    samples = map_replications(sample_path, tasks, settings.workers, desc="limit paths")

    rows = [
        {"path_id": i, "v": v, "Z": z}
        for i, sample in enumerate(samples)
        for v, z in zip(cfg.v_values, sample.z)
    ]
    frame = pd.DataFrame(rows, columns=["path_id", "v", "Z"])
    frame.to_csv(run_dir / Z_SAMPLES_CSV, index=False)

    for i, task in enumerate(tasks[: cfg.export_paths]):
        reflected = ReflectedPath(simulate_path(task))
        path_frame(reflected).to_csv(run_dir / f"path_{i}.csv", index=False)
        excursion_frame(reflected.excursions()).to_csv(run_dir / f"excursions_{i}.csv", index=False)
    return samples, frame


def _excursion_rates(samples: list[PathSample], params: LimitLawParams) -> dict[str, Any]:
    local_time = sum(s.local_time for s in samples)
    out: dict[str, Any] = {}
    for j, q in enumerate(RATE_LEVELS):
        empirical = sum(s.rate_counts[j] for s in samples) / local_time
        exact = h(q, params)
        out[f"{q:g}"] = {
            "empirical": empirical,
            "h": exact,
            "relative_error": abs(empirical - exact) / exact,
        }
    return out


def _limit_summary(cfg: LimitConfig, samples: list[PathSample]) -> dict[str, Any]:
    c = c_alpha(cfg.alpha)
    by_v: dict[str, Any] = {}
    for k, v in enumerate(cfg.v_values):
        z = np.array([s.z[k] for s in samples])
        reindexed = np.array([s.reindexed[k] for s in samples])
        by_v[f"{v:g}"] = {
            "quantiles": quantiles(z, SUMMARY_PROBS).tolist(),
            "zero_fraction": float(np.mean(z == 0.0)),
            "reindexed_ks": ks_two_sample(z, reindexed),
        }
    return {
        "paths": len(samples),
        "c_alpha": c,
        "truncation_variance": truncation_variance(cfg.alpha, c, cfg.eps),
        "mean_jumps": float(np.mean([s.jumps for s in samples])),
        "mean_horizon": float(np.mean([s.horizon for s in samples])),
        "z": by_v,
    }


def run_limit_sim(settings: Settings, run_dir: Path) -> CommandResult:
    cfg = settings.limit
    samples, _ = collect_samples(settings, run_dir)
    report = _limit_summary(cfg, samples)
    report["excursion_rates"] = _excursion_rates(samples, LimitLawParams(cfg.alpha))
    logger.info("Simulated limit paths", extra={"paths": cfg.paths, "alpha": cfg.alpha})
    return CommandResult(report)


def ks_against_law(
    z_by_v: dict[float, np.ndarray], params: LimitLawParams, threshold: float
) -> tuple[dict[str, Any], pd.DataFrame, list[float]]:
    """KS distance of each Z(v) sample from F_v, plus a table of F_v against the ecdf."""
    table = default_table(params)
    entries: dict[str, Any] = {}
    rows: list[dict[str, float]] = []
    failing: list[float] = []
    for v, z in z_by_v.items():
        cdf = limit_cdf(v, params, table)
        distance = ks_distance(z, cdf)
        passed = distance <= threshold
        entries[f"{v:g}"] = {
            "ks": distance,
            "critical_95": ks_critical_value(z.size),
            "threshold": threshold,
            "passed": passed,
        }
        if not passed:
            failing.append(v)
        for y in quantiles(z, SUMMARY_PROBS):
            rows.append(
                {"v": v, "y": float(y), "F_v": float(cdf(y)[0]), "ecdf": float(ecdf(z, y))}
            )
    frame = pd.DataFrame(rows, columns=["v", "y", "F_v", "ecdf"])
    return entries, frame, failing


def run_limit_compare(settings: Settings, run_dir: Path) -> CommandResult:
    cfg = settings.limit
    threshold = settings.compare.threshold
    samples, _ = collect_samples(settings, run_dir)
    params = LimitLawParams(cfg.alpha)
    z_by_v = {v: np.array([s.z[k] for s in samples]) for k, v in enumerate(cfg.v_values)}
    entries, frame, failing = ks_against_law(z_by_v, params, threshold)
    frame.to_csv(run_dir / LAW_TABLE_CSV, index=False)

    reliable = len(samples) >= cfg.min_reliable_paths
    if not reliable:
        logger.warning(
            "Sample size below reliability threshold",
            extra={"paths": len(samples), "min_reliable_paths": cfg.min_reliable_paths},
        )
    report = _limit_summary(cfg, samples)
    report.update({"ks": entries, "reliable": reliable, "passed": not failing})
    failure = None
    if failing:
        failure = AcceptanceFailure(
            f"KS distance above {threshold} for v in {[f'{v:g}' for v in failing]}"
        )
    return CommandResult(report, failure)
