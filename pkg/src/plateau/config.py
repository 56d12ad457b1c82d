from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Annotated, Any, Mapping

import yaml
from pydantic import AfterValidator, BaseModel, Field, ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from plateau.errors import ConfigError
from plateau.randomgen import DistSpec, parse_dist_spec

# Demo regime: Poisson arrivals with mean 3.1, Pareto(1, 1.5) services.
DEMO_ARRIVAL = "exp:0.3225806451612903"
DEMO_SERVICE = "pareto:1:1.5"

VERIFY_SUITES = (
    "three_way_sojourn",
    "idleness_identities",
    "transfer_count_forms",
    "hscale_identity",
    "plateau_counterexample",
)


def _check_dist(value: str) -> str:
    parse_dist_spec(value)
    return value


def _check_alpha(value: float) -> float:
    if not 1.0 < value < 2.0:
        raise ValueError(f"alpha must lie in (1, 2), got {value}")
    return value


DistString = Annotated[str, AfterValidator(_check_dist)]
TailIndex = Annotated[float, AfterValidator(_check_alpha)]


class SimulateConfig(BaseModel):
    """Single tandem run (the `simulate` command)."""

    arrival: DistString = DEMO_ARRIVAL
    service: DistString = DEMO_SERVICE
    jobs: int = Field(default=1000, ge=0)
    grid_step: float | None = Field(default=None, gt=0)

    def arrival_spec(self) -> DistSpec:
        return parse_dist_spec(self.arrival)

    def service_spec(self) -> DistSpec:
        return parse_dist_spec(self.service)


class SweepConfig(BaseModel):
    """Heavy-traffic family and sweep sizes (the `scale-sweep` command)."""

    alpha: TailIndex = 1.5
    gamma: float = 1.0
    service: DistString = DEMO_SERVICE
    arrival: DistString = "exp:1"
    r_values: list[float] = Field(default_factory=lambda: [1e3, 1e4, 1e5])
    replications: int = Field(default=2000, ge=1)
    t: float = Field(default=1.0, gt=0)

    @field_validator("r_values")
    @classmethod
    def _positive_sorted(cls, value: list[float]) -> list[float]:
        if not value or any(r <= 0 for r in value):
            raise ValueError("r_values must be a non-empty list of positive numbers")
        return sorted(value)


class LimitConfig(BaseModel):
    """Limit-process simulation (the `limit-sim` and `limit-compare` commands)."""

    alpha: TailIndex = 1.5
    eps: float = Field(default=1e-4, gt=0, lt=1)
    paths: int = Field(default=5000, ge=1)
    v_values: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])
    horizon: float | None = Field(default=None, gt=0)
    export_paths: int = Field(default=1, ge=0)
    min_reliable_paths: int = Field(default=100, ge=1)

    @field_validator("v_values")
    @classmethod
    def _nonnegative(cls, value: list[float]) -> list[float]:
        if any(v < 0 for v in value):
            raise ValueError("v_values must be >= 0")
        return sorted(value)


class LawConfig(BaseModel):
    """Numerical limit-law tables (the `limit-law` command)."""

    alpha: TailIndex = 1.5
    q_min: float = Field(default=1e-3, gt=0)
    q_max: float = Field(default=1e4, gt=0)
    q_points: int = Field(default=200, ge=2)
    v_values: list[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0])
    y_grid: list[float] = Field(default_factory=lambda: [0.1, 0.5, 1.0, 2.0, 5.0])
    tol: float = Field(default=1e-12, gt=0)


class CompareConfig(BaseModel):
    """KS comparison of a Z-sample CSV with the limit law (the `compare` command)."""

    sample_csv: Path | None = None
    alpha: TailIndex = 1.5
    threshold: float = Field(default=0.05, gt=0, le=1)


class VerifyConfig(BaseModel):
    """Exact-identity suite (the `verify` command)."""

    suites: list[str] = Field(default_factory=lambda: list(VERIFY_SUITES))
    instances: int = Field(default=20, ge=1)
    jobs: int = Field(default=10_000, ge=1)
    queries: int = Field(default=1000, ge=1)
    hscale_tuples: int = Field(default=1000, ge=1)
    tol: float = Field(default=1e-9, gt=0)
    corrupt: str | None = None

    @field_validator("suites")
    @classmethod
    def _known_suites(cls, value: list[str]) -> list[str]:
        unknown = sorted(set(value) - set(VERIFY_SUITES))
        if unknown:
            raise ValueError(f"unknown verify suites: {unknown}")
        return value

    @field_validator("corrupt")
    @classmethod
    def _known_corrupt(cls, value: str | None) -> str | None:
        if value is not None and value not in VERIFY_SUITES:
            raise ValueError(f"--corrupt must name a verify suite, got {value!r}")
        return value


class Settings(BaseSettings):
    """Experiment configuration: defaults, then environment/.env, then YAML file, then flags."""

    # the ledger stores seeds in a signed 64-bit column
    seed: int = Field(default=20240611, ge=0, lt=2**63)
    workers: int = Field(default=1, ge=1)
    out_dir: Path = Field(default=Path("runs"))
    ledger_url: str | None = Field(default=None)
    log_level: str = Field(default="INFO")

    simulate: SimulateConfig = Field(default_factory=SimulateConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    limit: LimitConfig = Field(default_factory=LimitConfig)
    law: LawConfig = Field(default_factory=LawConfig)
    compare: CompareConfig = Field(default_factory=CompareConfig)
    verify: VerifyConfig = Field(default_factory=VerifyConfig)

    model_config = SettingsConfigDict(
        env_prefix="PLATEAU_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    def snapshot(self) -> dict[str, Any]:
        """Fully materialised settings as plain JSON types."""
        return json.loads(self.model_dump_json())

    def section_snapshot(self, *sections: str) -> dict[str, Any]:
        """Seed plus the named sections; the part of the config that determines a run's output."""
        full = self.snapshot()
        return {"seed": full["seed"], **{name: full[name] for name in sections}}


def config_sha256(snapshot: Mapping[str, Any]) -> str:
    serialized = json.dumps(snapshot, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(serialized.encode("utf-8")).hexdigest()


def load_settings(
    config_path: Path | None = None, overrides: Mapping[str, Any] | None = None
) -> Settings:
    """
    Build settings from an optional YAML file plus flag overrides.

    `overrides` uses dotted keys ("limit.alpha") or top-level names ("seed"); None values are
    skipped so unset CLI flags never mask the file.
    """

    data: dict[str, Any] = {}
    if config_path is not None:
        try:
            loaded = yaml.safe_load(Path(config_path).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise ConfigError(f"Config file not found: {config_path}") from exc
        except yaml.YAMLError as exc:
            raise ConfigError(f"Config file {config_path} is not valid YAML: {exc}") from exc
        if loaded is not None and not isinstance(loaded, dict):
            raise ConfigError(f"Config file {config_path} must contain a mapping")
        data = loaded or {}

    for key, value in (overrides or {}).items():
        if value is None:
            continue
        target = data
        *parents, leaf = key.split(".")
        for parent in parents:
            target = target.setdefault(parent, {})
        target[leaf] = value

    try:
        return Settings(**data)
    except (ValidationError, ConfigError) as exc:
        raise ConfigError(f"Invalid configuration: {exc}") from exc


def write_snapshot(snapshot: Mapping[str, Any], path: Path) -> None:
    path.write_text(yaml.safe_dump(dict(snapshot), sort_keys=True), encoding="utf-8")
