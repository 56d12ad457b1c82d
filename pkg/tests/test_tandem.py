from __future__ import annotations

import numpy as np
import pytest

from plateau.randomgen import DistSpec, SeededStream
from plateau.tandem import (
    CONTINUOUS_COLUMNS,
    JOB_COLUMNS,
    TandemInputs,
    arrivals_Q2,
    arrivals_Q2_via_H,
    build_trajectory,
    continuous_frame,
    idleness_closed_form,
    idleness_closed_form_all,
    idleness_via_H,
    idleness_via_H_all,
    plateau_path,
    simulate_inputs,
    sojourn_functional,
    sojourn_lindley,
    sojourn_maxformula,
    trajectory_frame,
)


@pytest.fixture
def small_inputs() -> TandemInputs:
    return TandemInputs.of([1.0, 0.5, 3.0], [2.0, 1.0, 0.5])


@pytest.fixture
def heavy_inputs() -> TandemInputs:
    return simulate_inputs(
        DistSpec.exponential(1 / 3.1), DistSpec.pareto(1.0, 1.5), 2000, SeededStream(17)
    )


def test_hand_computed_trajectory(small_inputs):
    traj = build_trajectory(small_inputs)

    np.testing.assert_allclose(traj.I, [1.0, 1.0, 1.5])
    np.testing.assert_allclose(traj.D, [3.0, 4.0, 5.0])
    np.testing.assert_allclose(traj.M, [2.0, 2.0, 1.5])
    np.testing.assert_allclose(traj.C, [5.0, 6.0, 6.5])


def test_continuous_time_accessors(small_inputs):
    traj = build_trajectory(small_inputs)

    assert traj.R(2.99) == 0
    assert traj.R(3.0) == 1
    assert traj.W1(2.0) == pytest.approx(2.0)
    assert traj.W2(4.5) == pytest.approx(1.5)
    assert traj.M_at(4.5) == pytest.approx(2.0)
    assert traj.M_at(0.0) == 0.0
    assert traj.I_at(4.2) == pytest.approx(1.2)


def test_vectorized_pass_matches_event_pass(heavy_inputs):
    event = build_trajectory(heavy_inputs)
    vector = build_trajectory(heavy_inputs, vectorized=True)

    np.testing.assert_allclose(vector.I, event.I, rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(vector.M, event.M, rtol=1e-12, atol=1e-9)


def test_three_sojourn_forms_agree(heavy_inputs):
    event = build_trajectory(heavy_inputs).M
    lindley = sojourn_lindley(heavy_inputs)

    np.testing.assert_allclose(sojourn_maxformula(heavy_inputs), lindley, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(sojourn_functional(heavy_inputs), lindley, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(event, lindley, rtol=1e-9, atol=1e-9)


def test_idleness_forms_agree(heavy_inputs):
    closed = idleness_closed_form_all(heavy_inputs)

    np.testing.assert_allclose(idleness_via_H_all(heavy_inputs), closed, rtol=1e-9, atol=1e-9)
    np.testing.assert_allclose(build_trajectory(heavy_inputs).I, closed, rtol=1e-9, atol=1e-9)
    assert idleness_closed_form(heavy_inputs, 10) == pytest.approx(closed[9])
    assert idleness_via_H(heavy_inputs, 10) == pytest.approx(closed[9])
    with pytest.raises(ValueError):
        idleness_closed_form(heavy_inputs, 0)


def test_transfer_count_forms_agree(heavy_inputs):
    traj = build_trajectory(heavy_inputs)
    queries = np.linspace(0.0, float(traj.D[-1]) * 1.1, 997)

    np.testing.assert_array_equal(arrivals_Q2(traj, queries), arrivals_Q2_via_H(traj, queries))
    assert int(arrivals_Q2(traj, traj.D[-1])) == traj.n


def test_structural_properties(heavy_inputs):
    traj = build_trajectory(heavy_inputs)
    times = traj.event_times()

    assert np.all(traj.M_at(times) >= traj.W2(times) - 1e-9)
    assert np.all(traj.W1(times) >= 0)
    empty = traj.empty_on_arrival()
    assert empty[0]
    np.testing.assert_array_equal(traj.M[empty], heavy_inputs.v[empty])
    assert np.all(traj.M >= heavy_inputs.v)


def test_upward_plateau_moves_happen_at_record_jobs(heavy_inputs):
    # inside a queue-1 busy period d_n = v_n, so M_n = max(M_{n-1}, v_n) and M rises only at a
    # record; the job opening a busy period is always flagged
    traj = build_trajectory(heavy_inputs)
    previous = np.concatenate(([0.0], traj.M[:-1]))
    up = traj.M > previous + 1e-9 * np.maximum(1.0, previous)
    assert up.any()

    assert np.all(traj.record_jobs()[up])


def test_plateau_path_is_M_between_transfers(small_inputs):
    traj = build_trajectory(small_inputs)
    path = plateau_path(traj)

    assert path.evaluate(0.5) == 0.0
    assert path.evaluate(3.5) == 2.0
    assert path.evaluate(5.0) == 1.5


def test_empty_instance():
    traj = build_trajectory(TandemInputs.of([], []))
    assert traj.n == 0
    assert traj.R(1.0) == 0
    assert list(continuous_frame(traj).columns) == CONTINUOUS_COLUMNS


def test_inputs_validation():
    with pytest.raises(ValueError):
        TandemInputs.of([1.0], [0.0])
    with pytest.raises(ValueError):
        TandemInputs.of([-1.0], [1.0])
    with pytest.raises(ValueError):
        TandemInputs.of([1.0, 2.0], [1.0])


def test_frames(small_inputs):
    traj = build_trajectory(small_inputs)
    jobs = trajectory_frame(traj)
    continuous = continuous_frame(traj, uniform_grid=[0.25, 7.0])

    assert list(jobs.columns) == JOB_COLUMNS
    assert jobs["n"].tolist() == [1, 2, 3]
    assert list(continuous.columns) == CONTINUOUS_COLUMNS
    assert {0.25, 7.0} <= set(continuous["t"])
    assert continuous["t"].is_monotonic_increasing


def test_saturated_first_queue():
    inputs = TandemInputs.of([1.0, 1.0, 1.0], [2.0, 2.0, 2.0])
    traj = build_trajectory(inputs)

    np.testing.assert_allclose(traj.I, [1.0, 1.0, 1.0])
    np.testing.assert_allclose(traj.D, [3.0, 5.0, 7.0])
    np.testing.assert_allclose(traj.M, [2.0, 2.0, 2.0])
    np.testing.assert_allclose(sojourn_lindley(inputs), [2.0, 2.0, 2.0])
    assert [idleness_via_H(inputs, n) for n in (1, 2, 3)] == pytest.approx([1.0, 1.0, 1.0])

    assert int(arrivals_Q2(traj, 5.0)) == 2
    assert int(arrivals_Q2_via_H(traj, 5.0)) == 2
    assert int(arrivals_Q2(traj, 2.99)) == 0

    path = plateau_path(traj)
    np.testing.assert_array_equal(path.breakpoints, [3.0, 5.0, 7.0])
    np.testing.assert_array_equal(path.values, [2.0, 2.0, 2.0])


def test_every_job_finds_both_queues_empty():
    inputs = TandemInputs.of([1.0, 1.0, 1.0], [0.5, 0.5, 0.5])
    traj = build_trajectory(inputs)

    np.testing.assert_allclose(traj.I, [1.0, 1.5, 2.0])
    np.testing.assert_allclose(traj.D, [1.5, 2.5, 3.5])
    np.testing.assert_allclose(traj.M, [0.5, 0.5, 0.5])
    assert traj.empty_on_arrival().all()


def test_idle_gaps_accumulate():
    inputs = TandemInputs.of([2.0, 2.0, 2.0], [1.0, 1.0, 1.0])

    assert idleness_closed_form(inputs, 3) == pytest.approx(4.0)
    assert idleness_via_H(inputs, 3) == pytest.approx(4.0)
    np.testing.assert_allclose(sojourn_maxformula(inputs), [1.0, 1.0, 1.0])


def test_single_job():
    inputs = TandemInputs.of([1.5], [2.0])
    traj = build_trajectory(inputs)

    assert traj.I[0] == pytest.approx(1.5)
    assert traj.D[0] == pytest.approx(3.5)
    assert traj.M[0] == pytest.approx(2.0)
    assert idleness_closed_form(inputs, 1) == pytest.approx(1.5)
    assert idleness_via_H(inputs, 1) == pytest.approx(1.5)
    for form in (sojourn_lindley, sojourn_maxformula, sojourn_functional):
        np.testing.assert_allclose(form(inputs), [2.0])
    assert plateau_path(traj).evaluate(3.4) == 0.0
    assert plateau_path(traj).evaluate(3.5) == 2.0


def test_two_unit_jobs_through_the_functional():
    np.testing.assert_allclose(sojourn_functional(TandemInputs.of([1.0, 1.0], [1.0, 1.0])), [1.0, 1.0])
