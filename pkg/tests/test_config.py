from __future__ import annotations

import pytest
import yaml

from plateau.config import (
    DEMO_ARRIVAL,
    VERIFY_SUITES,
    config_sha256,
    load_settings,
    write_snapshot,
)
from plateau.errors import ConfigError


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch, tmp_path):
    for name in ("PLATEAU_SEED", "PLATEAU_WORKERS", "PLATEAU_LIMIT__ALPHA"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


def test_defaults():
    settings = load_settings()
    assert settings.seed == 20240611
    assert settings.workers == 1
    assert settings.simulate.arrival == DEMO_ARRIVAL
    assert settings.simulate.arrival_spec().mean == pytest.approx(3.1)
    assert settings.simulate.service_spec().mean == pytest.approx(3.0)
    assert settings.sweep.r_values == [1e3, 1e4, 1e5]
    assert settings.limit.v_values == [0.5, 1.0, 2.0]
    assert settings.verify.suites == list(VERIFY_SUITES)
    assert settings.compare.threshold == 0.05


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("PLATEAU_SEED", "7")
    monkeypatch.setenv("PLATEAU_LIMIT__ALPHA", "1.7")
    settings = load_settings()
    assert settings.seed == 7
    assert settings.limit.alpha == 1.7


def test_yaml_file_then_flags(tmp_path):
    config = tmp_path / "run.yaml"
    config.write_text(
        yaml.safe_dump({"seed": 3, "limit": {"alpha": 1.3, "paths": 50}}), encoding="utf-8"
    )
    settings = load_settings(config, {"limit.paths": 10, "limit.eps": None, "workers": 2})

    assert settings.seed == 3
    assert settings.limit.alpha == 1.3
    assert settings.limit.paths == 10
    assert settings.limit.eps == 1e-4
    assert settings.workers == 2


def test_sweep_r_values_are_sorted():
    settings = load_settings(overrides={"sweep.r_values": ["1e4", "1e2"]})
    assert settings.sweep.r_values == [100.0, 10_000.0]


@pytest.mark.parametrize(
    "overrides",
    [
        {"limit.alpha": 2.0},
        {"simulate.service": "gamma:1"},
        {"verify.suites": ["no_such_suite"]},
        {"verify.corrupt": "no_such_suite"},
        {"sweep.r_values": [-1.0]},
        {"seed": -1},
        {"seed": 2**63},
        {"compare.threshold": 0.0},
    ],
)
def test_invalid_values_raise_config_error(overrides):
    with pytest.raises(ConfigError):
        load_settings(overrides=overrides)


def test_bad_config_files(tmp_path):
    with pytest.raises(ConfigError):
        load_settings(tmp_path / "missing.yaml")

    listing = tmp_path / "list.yaml"
    listing.write_text("- 1\n- 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_settings(listing)

    broken = tmp_path / "broken.yaml"
    broken.write_text("seed: [1, 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_settings(broken)


def test_section_snapshot_and_hash(tmp_path):
    settings = load_settings()
    snapshot = settings.section_snapshot("limit", "compare")

    assert set(snapshot) == {"seed", "limit", "compare"}
    assert config_sha256(snapshot) == config_sha256(dict(reversed(list(snapshot.items()))))
    other = load_settings(overrides={"limit.paths": 7}).section_snapshot("limit", "compare")
    assert config_sha256(other) != config_sha256(snapshot)

    write_snapshot(snapshot, tmp_path / "config.yaml")
    assert yaml.safe_load((tmp_path / "config.yaml").read_text(encoding="utf-8")) == snapshot
