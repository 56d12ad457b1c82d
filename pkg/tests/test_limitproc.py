from __future__ import annotations

import math
import os

import numpy as np
import pytest

from plateau.errors import HorizonExceededError
from plateau.experiments.limit import PathTask, path_stream, sample_path
from plateau.experiments.pool import map_replications
from plateau.limitlaw import LimitLawParams, c_alpha, default_table, h, limit_cdf
from plateau.limitproc import (
    EXCURSION_COLUMNS,
    PATH_COLUMNS,
    JumpDriftPath,
    ReflectedPath,
    M_star_path,
    Z_from_excursions,
    Z_of_v,
    compensation_drift,
    excursion_decompose,
    excursion_frame,
    excursion_levels_sup,
    extend,
    inverse_local_time,
    max_jump_rate,
    path_frame,
    reflect_local_time,
    simulate_X,
    simulate_X_until,
    truncation_variance,
)
from plateau.randomgen import SeededStream
from plateau.stats import ks_distance


@pytest.fixture
def one_jump() -> ReflectedPath:
    # X falls to -1 at t=1, jumps to +1, and returns to -1 at t=3.
    return reflect_local_time(JumpDriftPath.single_jump(1.0, 2.0, horizon=5.0))


@pytest.fixture(scope="module")
def random_path() -> ReflectedPath:
    return ReflectedPath(simulate_X_until(1.5, 2.0, 0.05, SeededStream(23)))


def test_single_jump_local_time_and_reflection(one_jump):
    assert one_jump.L(0.5) == pytest.approx(0.5)
    assert one_jump.L(2.0) == pytest.approx(1.0)
    assert one_jump.L(4.0) == pytest.approx(2.0)
    assert one_jump.local_time_total == pytest.approx(3.0)
    assert one_jump.Y(2.0) == pytest.approx(1.0)
    assert one_jump.Y(3.5) == 0.0
    assert one_jump.X(1.0) == pytest.approx(1.0)
    assert one_jump.path.left_value(1.0) == pytest.approx(-1.0)


def test_single_jump_inverse_local_time(one_jump):
    assert inverse_local_time(one_jump, 0.5) == pytest.approx(0.5)
    assert inverse_local_time(one_jump, 1.0) == pytest.approx(3.0)
    assert inverse_local_time(one_jump, 2.0) == pytest.approx(4.0)
    with pytest.raises(HorizonExceededError) as info:
        inverse_local_time(one_jump, 3.0)
    assert info.value.suggested_horizon > one_jump.horizon


def test_single_jump_excursion_and_Z(one_jump):
    (record,) = excursion_decompose(one_jump)
    assert record.level == pytest.approx(1.0)
    assert record.start == 1.0
    assert record.end == pytest.approx(3.0)
    assert record.lifetime == pytest.approx(2.0)
    assert record.max_jump == 2.0
    assert not record.censored

    assert Z_of_v(one_jump, 0.5) == 0.0
    assert Z_of_v(one_jump, 1.0) == pytest.approx(2.0)
    assert Z_of_v(one_jump, 2.0) == pytest.approx(1.0)
    np.testing.assert_allclose(Z_from_excursions([record], [0.5, 1.0, 2.0]), [0.0, 2.0, 1.0])
    assert excursion_levels_sup([record], 2.0) == pytest.approx(1.0)
    assert excursion_levels_sup([record], 0.5) == 0.0


def test_excursion_running_past_horizon_is_censored():
    reflected = ReflectedPath(JumpDriftPath.single_jump(1.0, 10.0, horizon=4.0))
    (record,) = reflected.excursions()
    assert record.censored
    assert record.end == 4.0
    assert max_jump_rate([record], 0.5, 1.0) == 0.0


def test_plateau_limit_path(one_jump):
    m_star = M_star_path(one_jump, mu=2.0)
    assert m_star(1.0) == 0.0
    assert m_star(6.0) == pytest.approx(2.0)
    assert m_star(8.0) == pytest.approx(1.0)
    np.testing.assert_allclose(m_star.grid(), [2.0])


def test_jump_drift_path_validation():
    with pytest.raises(ValueError):
        JumpDriftPath(-1.0, np.array([2.0, 1.0]), np.array([1.0, 1.0]), 3.0)
    with pytest.raises(ValueError):
        JumpDriftPath(-1.0, np.array([1.0]), np.array([-1.0]), 3.0)
    with pytest.raises(ValueError):
        ReflectedPath(JumpDriftPath(1.0, np.empty(0), np.empty(0), 1.0))
    with pytest.raises(ValueError):
        JumpDriftPath.single_jump(1.0, 1.0, 2.0).value(2.5)


def test_simulated_path_reflection_identities(random_path):
    assert random_path.local_time_total > 2.0
    times = np.sort(
        np.random.default_rng(1).uniform(0.0, random_path.horizon, size=500)
    )
    x, y, local = random_path.X(times), random_path.Y(times), random_path.L(times)

    np.testing.assert_allclose(x, y - local, atol=1e-9)
    assert np.all(y >= -1e-12)
    assert np.all(np.diff(local) >= -1e-12)


def test_inverse_local_time_inverts_L(random_path):
    levels = np.linspace(0.01, 1.99, 40)
    times = random_path.inverse_local_time(levels)

    np.testing.assert_allclose(random_path.L(times), levels, atol=1e-9)
    assert np.all(np.diff(times) > 0)


def test_Z_from_excursions_matches_path_form(random_path):
    excursions = random_path.excursions()
    levels = np.linspace(0.05, 1.95, 25)

    assert len(excursions) > 0
    assert all(e.lifetime >= 0 for e in excursions)
    np.testing.assert_allclose(
        Z_from_excursions(excursions, levels), random_path.Z(levels), atol=1e-12
    )


def test_simulate_X_until_and_extend():
    stream = SeededStream(31)
    path = simulate_X_until(1.5, 1.0, 0.1, stream)
    assert path.local_time_at_horizon() > 1.0

    short = simulate_X(1.5, 2.0, 0.1, stream.child("x"))
    longer = extend(short, 4.0, 1.5, 0.1, stream.child("y"))
    assert longer.horizon == 4.0
    np.testing.assert_array_equal(longer.jump_times[: short.jump_count], short.jump_times)
    assert longer.slope == short.slope
    with pytest.raises(ValueError):
        extend(short, 1.0, 1.5, 0.1, stream)


def test_simulate_X_until_gives_up_with_hint():
    with pytest.raises(HorizonExceededError) as info:
        simulate_X_until(1.5, 1e6, 0.5, SeededStream(2), horizon=1.0, max_doublings=2)
    assert info.value.suggested_horizon == pytest.approx(8.0)


def test_compensation_and_truncation_constants():
    c = c_alpha(1.5)
    assert compensation_drift(1.5, c, 0.01) == pytest.approx(-c * 10.0 / 0.5)
    assert truncation_variance(1.5, c, 0.01) == pytest.approx(c * 0.1 / 0.5)


def test_truncated_path_has_the_limit_laplace_exponent():
    alpha, eps, s = 1.5, 0.01, 0.5
    c = c_alpha(alpha)
    root = SeededStream(101)
    terminal = np.array(
        [simulate_X(alpha, 1.0, eps, root.child(f"p{i}")).terminal_value() for i in range(4000)]
    )
    # small-jump correction to s + s^alpha, leading order in eps
    exponent = s + s**alpha - c * s * s * eps ** (2 - alpha) / (2 * (2 - alpha))
    assert np.mean(np.exp(-s * terminal)) == pytest.approx(math.exp(exponent), rel=0.04)


def test_exports(one_jump):
    frame = path_frame(one_jump)
    assert list(frame.columns) == PATH_COLUMNS
    assert frame["t"].tolist() == [0.0, 1.0, 5.0]
    assert frame["L"].iloc[-1] == pytest.approx(3.0)

    excursions = excursion_frame(one_jump.excursions())
    assert list(excursions.columns) == EXCURSION_COLUMNS
    assert excursions["lifetime"].iloc[0] == pytest.approx(2.0)
    assert list(excursion_frame([]).columns) == EXCURSION_COLUMNS


@pytest.mark.slow
def test_excursion_rate_matches_h():
    params = LimitLawParams(1.5)
    root = SeededStream(7)
    counts = 0
    local_time = 0.0
    for i in range(400):
        reflected = ReflectedPath(simulate_X_until(1.5, 2.0, 1e-3, root.child(f"path-{i}")))
        excursions = reflected.excursions()
        counts += sum(1 for e in excursions if e.max_jump > 0.5 and not e.censored)
        local_time += reflected.local_time_total
    assert counts / local_time == pytest.approx(h(0.5, params), rel=0.2)


@pytest.mark.slow
def test_Z_sample_is_close_to_limit_law():
    params = LimitLawParams(1.5)
    table = default_table(params)
    root = SeededStream(2024)
    z = np.array(
        [
            Z_of_v(simulate_X_until(1.5, 1.0, 1e-3, root.child(f"path-{i}")), 1.0)
            for i in range(400)
        ]
    )
    assert ks_distance(z, limit_cdf(1.0, params, table)) < 0.12


ACCEPTANCE_V = (0.5, 1.0, 2.0)


@pytest.fixture(scope="module")
def acceptance_samples() -> np.ndarray:
    seed = 2024
    tasks = [
        PathTask(
            alpha=1.5,
            eps=1e-4,
            v_values=ACCEPTANCE_V,
            horizon=None,
            seed=seed,
            label=path_stream(seed, i).label,
        )
        for i in range(5000)
    ]
    samples = map_replications(sample_path, tasks, workers=os.cpu_count() or 1)
    return np.array([sample.z for sample in samples])


@pytest.mark.slow
@pytest.mark.parametrize("column,v", list(enumerate(ACCEPTANCE_V)))
def test_Z_matches_limit_law_at_acceptance_scale(acceptance_samples, column, v):
    params = LimitLawParams(1.5)
    table = default_table(params)
    z = acceptance_samples[:, column]
    assert ks_distance(z, limit_cdf(v, params, table)) <= 0.05
