from __future__ import annotations

import numpy as np
import pytest
from scipy import stats

from plateau.randomgen import DistSpec, SeededStream, sample
from plateau.stats import (
    EmpiricalSample,
    ecdf,
    hill_estimator,
    ks_critical_value,
    ks_distance,
    ks_two_sample,
    quantiles,
)


def _uniform_cdf(x):
    return np.clip(x, 0.0, 1.0)


def test_empirical_sample_sorts_and_rejects_nan():
    s = EmpiricalSample([3.0, 1.0, 2.0], {"v": 1.0})
    np.testing.assert_array_equal(s.values, [1.0, 2.0, 3.0])
    assert len(s) == 3
    assert s.metadata["v"] == 1.0
    with pytest.raises(ValueError):
        EmpiricalSample([1.0, np.nan])


def test_ecdf_counts_ties():
    data = [1.0, 2.0, 2.0, 4.0]
    assert ecdf(data, 0.5) == 0.0
    assert ecdf(data, 2.0) == 0.75
    np.testing.assert_array_equal(ecdf(data, [1.0, 3.0, 5.0]), [0.25, 0.75, 1.0])
    with pytest.raises(ValueError):
        ecdf([], 1.0)


def test_ks_distance_single_point():
    assert ks_distance([0.5], _uniform_cdf) == pytest.approx(0.5)
    assert ks_distance([0.25, 0.75], _uniform_cdf) == pytest.approx(0.25)


def test_ks_distance_handles_atoms():
    # half the mass at zero, half uniform on (0, 1)
    def cdf(x):
        x = np.asarray(x, dtype=np.float64)
        return np.where(x < 0, 0.0, 0.5 + 0.5 * np.clip(x, 0.0, 1.0))

    assert ks_distance([0.0, 0.0, 0.25, 0.75], cdf) == pytest.approx(0.125)


def test_ks_distance_matches_scipy():
    values = sample(DistSpec.uniform(0.0, 1.0), SeededStream(4), 500)
    expected = stats.kstest(values, "uniform").statistic
    assert ks_distance(EmpiricalSample(values), _uniform_cdf) == pytest.approx(expected)


def test_two_sample_and_critical_value():
    a = sample(DistSpec.exponential(1.0), SeededStream(1), 300)
    assert ks_two_sample(a, a) == 0.0
    assert ks_two_sample(a, a + 10.0) == 1.0
    assert ks_critical_value(100) == pytest.approx(0.134, abs=0.002)
    with pytest.raises(ValueError):
        ks_critical_value(0)


def test_hill_estimator_recovers_pareto_index():
    values = sample(DistSpec.pareto(1.0, 1.5), SeededStream(8), 20_000)
    assert hill_estimator(values, 2000) == pytest.approx(1.5, rel=0.08)
    with pytest.raises(ValueError):
        hill_estimator(values, 0)


def test_quantiles():
    np.testing.assert_allclose(quantiles([1.0, 2.0, 3.0, 4.0, 5.0], [0.0, 0.5, 1.0]), [1, 3, 5])
