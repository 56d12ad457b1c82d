from __future__ import annotations

import json

import numpy as np
import pandas as pd
import pytest
from sqlalchemy import func, select

from plateau.config import load_settings
from plateau.errors import AcceptanceFailure, ConfigError, IdentityViolation
from plateau.experiments import (
    COMMANDS,
    ExperimentRunner,
    map_replications,
    run_suites,
)
from plateau.experiments.law import kappa_frame, tail_slope
from plateau.experiments.simulate import structural_checks
from plateau.experiments.verify import midpoint_grid, scaled_deviation
from plateau.limitlaw import LimitLawParams
from plateau.paths import StepPath
from plateau.randomgen import DistSpec, SeededStream
from plateau.storage import (
    ArtifactRecord,
    ExperimentRunRecord,
    create_session_factory,
    init_db,
)
from plateau.tandem import build_trajectory, simulate_inputs

SMALL_LIMIT = {"limit.eps": 0.05, "limit.paths": 30, "limit.v_values": [0.5, 1.0]}


@pytest.fixture
def runner(tmp_path):
    session_factory, engine = create_session_factory(f"sqlite:///{tmp_path / 'ledger.db'}")
    init_db(engine)
    return ExperimentRunner(session_factory, tmp_path / "runs")


def _run(runner, command, **overrides):
    settings = load_settings(overrides=overrides)
    fn, sections = COMMANDS[command]
    return runner.run(command, settings, sections, fn)


def _square(x: int) -> int:
    return x * x


def test_map_replications_keeps_task_order():
    assert map_replications(_square, [3, 1, 2]) == [9, 1, 4]
    assert map_replications(_square, list(range(10)), workers=2) == [i * i for i in range(10)]
    with pytest.raises(ValueError):
        map_replications(_square, [1], workers=0)


def test_simulate_run_writes_outputs_and_ledger(runner):
    outcome = _run(runner, "simulate", **{"simulate.jobs": 300, "simulate.grid_step": 5.0})

    assert outcome.status == "success"
    assert outcome.run_dir.name.startswith("simulate-seed20240611-")
    jobs = pd.read_csv(outcome.run_dir / "trajectory.csv")
    assert len(jobs) == 300
    assert (outcome.run_dir / "continuous.csv").exists()
    assert all(outcome.report["checks"].values())

    report = json.loads((outcome.run_dir / "report.json").read_text(encoding="utf-8"))
    assert report["command"] == "simulate"
    assert report["config"]["simulate"]["jobs"] == 300

    with runner.session_factory() as session:
        run = session.get(ExperimentRunRecord, outcome.run_id)
        assert run.status == "success"
        assert run.finished_at is not None
        artifacts = session.scalars(
            select(ArtifactRecord.path).where(ArtifactRecord.run_id == outcome.run_id)
        ).all()
        assert set(artifacts) == {"config.yaml", "continuous.csv", "report.json", "trajectory.csv"}


def test_reruns_are_byte_identical(runner):
    first = _run(runner, "simulate", **{"simulate.jobs": 200})
    before = (first.run_dir / "trajectory.csv").read_bytes()
    report_before = (first.run_dir / "report.json").read_bytes()
    second = _run(runner, "simulate", **{"simulate.jobs": 200})

    assert second.run_dir == first.run_dir
    assert (second.run_dir / "trajectory.csv").read_bytes() == before
    assert (second.run_dir / "report.json").read_bytes() == report_before
    with runner.session_factory() as session:
        assert session.scalar(select(func.count()).select_from(ExperimentRunRecord)) == 2


def test_verify_passes_and_corruption_is_rejected(runner):
    small = {"verify.instances": 2, "verify.jobs": 200, "verify.hscale_tuples": 50}
    outcome = _run(runner, "verify", **small)
    assert outcome.report["passed"] is True

    with pytest.raises(IdentityViolation) as info:
        _run(runner, "verify", **small, **{"verify.corrupt": "three_way_sojourn"})
    assert info.value.failing == ["three_way_sojourn"]
    with runner.session_factory() as session:
        statuses = session.scalars(select(ExperimentRunRecord.status)).all()
        assert sorted(statuses) == ["rejected", "success"]


@pytest.mark.parametrize("suite", ["idleness_identities", "transfer_count_forms", "hscale_identity"])
def test_each_corrupted_suite_fails(suite):
    settings = load_settings(
        overrides={
            "verify.instances": 1,
            "verify.jobs": 100,
            "verify.hscale_tuples": 20,
            "verify.suites": [suite],
            "verify.corrupt": suite,
        }
    )
    assert run_suites(settings)[suite]["passed"] is False


def test_plateau_counterexample_suite_passes():
    settings = load_settings(overrides={"verify.suites": ["plateau_counterexample"]})
    result = run_suites(settings)
    assert result["plateau_counterexample"]["max_deviation"] == 0.0


def test_empty_suite_selection_passes(runner):
    outcome = _run(runner, "verify", **{"verify.suites": []})
    assert outcome.report == {"tolerance": 1e-9, "suites": {}, "passed": True, "failing": []}


def test_compare_without_sample_fails(runner):
    with pytest.raises(ConfigError):
        _run(runner, "compare")
    with runner.session_factory() as session:
        run = session.scalars(select(ExperimentRunRecord)).one()
        assert run.status == "failed"
        assert "sample" in run.error_message


def test_limit_sim_writes_samples(runner):
    outcome = _run(runner, "limit-sim", **SMALL_LIMIT)

    frame = pd.read_csv(outcome.run_dir / "z_samples.csv")
    assert list(frame.columns) == ["path_id", "v", "Z"]
    assert len(frame) == 60
    assert (frame["Z"] >= 0).all()
    assert (outcome.run_dir / "path_0.csv").exists()
    assert (outcome.run_dir / "excursions_0.csv").exists()
    assert set(outcome.report["excursion_rates"]) == {"0.5", "1", "2"}
    assert set(outcome.report["z"]) == {"0.5", "1"}


def test_limit_sim_does_not_depend_on_workers(runner):
    one = _run(runner, "limit-sim", **SMALL_LIMIT)
    z_one = (one.run_dir / "z_samples.csv").read_bytes()
    two = _run(runner, "limit-sim", **SMALL_LIMIT, workers=2)
    assert (two.run_dir / "z_samples.csv").read_bytes() == z_one


def test_limit_compare_rejects_above_threshold(runner):
    with pytest.raises(AcceptanceFailure):
        _run(runner, "limit-compare", **SMALL_LIMIT, **{"compare.threshold": 1e-6})
    with runner.session_factory() as session:
        run = session.scalars(select(ExperimentRunRecord)).one()
        assert run.status == "rejected"
        run_dir = run.run_dir
    table = pd.read_csv(f"{run_dir}/law_vs_empirical.csv")
    assert list(table.columns) == ["v", "y", "F_v", "ecdf"]


def test_compare_reads_a_sample_csv(runner, tmp_path):
    sample = tmp_path / "z.csv"
    pd.DataFrame({"v": [1.0] * 4, "Z": [0.2, 0.5, 1.0, 2.0]}).to_csv(sample, index=False)
    outcome = _run(runner, "compare", **{"compare.sample_csv": sample, "compare.threshold": 1.0})

    assert outcome.report["passed"] is True
    assert set(outcome.report["ks"]) == {"1"}


def test_limit_law_tables(runner):
    outcome = _run(
        runner,
        "limit-law",
        **{"law.q_min": 0.1, "law.q_max": 1e4, "law.q_points": 12, "law.y_grid": [0.5, 1.0]},
    )
    kappas = pd.read_csv(outcome.run_dir / "kappa.csv")
    law = pd.read_csv(outcome.run_dir / "law.csv")

    assert len(kappas) == 12
    assert outcome.report["monotonicity_violations"] == 0
    assert outcome.report["max_two_route_rel_diff"] < 1e-8
    assert len(law) == 6
    assert law["F_v"].between(0.0, 1.0).all()


@pytest.mark.parametrize("alpha", [1.3, 1.5, 1.7])
def test_kappa_tail_slope(alpha):
    params = LimitLawParams(alpha)
    frame = kappa_frame(params, np.geomspace(1e4, 1e6, 8))
    assert tail_slope(frame, 1e4, 1e6) == pytest.approx(1.0 - alpha, abs=0.05)


def test_structural_checks_on_simulated_run():
    inputs = simulate_inputs(
        DistSpec.exponential(1 / 3.1), DistSpec.pareto(1.0, 1.5), 500, SeededStream(12)
    )
    checks = structural_checks(build_trajectory(inputs))
    assert checks == {
        "plateau_dominates_workload": True,
        "workloads_nonnegative": True,
        "empty_arrivals_keep_service": True,
    }


def test_verify_helpers():
    assert scaled_deviation(np.array([1.0, 10.0]), np.array([1.0, 11.0])) == pytest.approx(1 / 11)
    assert scaled_deviation(np.empty(0), np.empty(0)) == 0.0
    grid = midpoint_grid(StepPath.from_points([1.0, 2.0], [1.0, 2.0]))
    np.testing.assert_allclose(grid, [0.5, 1.5, 3.0])


def test_largest_seed_is_recorded_in_the_ledger(runner):
    seed = 2**63 - 1
    outcome = _run(runner, "simulate", seed=seed, **{"simulate.jobs": 20})

    assert outcome.run_dir.name.startswith(f"simulate-seed{seed}-")
    with runner.session_factory() as session:
        run = session.get(ExperimentRunRecord, outcome.run_id)
        assert run.seed == seed
        assert run.status == "success"
