"""W_p empiriques, Kolmogorov, minorants de Zolotarev et plancher d'echantillonnage."""

import numpy as np
import pytest

from src.distances import (
    baseline_floor,
    distance_vs_normal,
    empirical_wp,
    kolmogorov_vs_normal,
    normal_grid_sample,
    wp_vs_normal,
    zolotarev_lower_bound,
    zolotarev_wp_diagnostic,
)
from src.errors import ConfigError, SampleSizeError
from src.models import EmpiricalSample
from src.rng import stream


def _sample(values):
    return EmpiricalSample.from_values(values)


def _shifted_normal(s=100_000, shift=0.5, seed=3):
    return _sample(stream(seed, "test").normal(size=s) + shift)


def test_identical_samples_are_at_distance_zero():
    a = _sample([0.3, -1.0, 2.5])
    assert empirical_wp(a, a, 2) == 0.0


@pytest.mark.parametrize("a, b, p, expected", [
    ([0.0, 0.0], [1.0, 1.0], 1, 1.0),
    ([0.0, 2.0], [1.0, 3.0], 2, 1.0),
    ([0.0, 1.0], [1.0, 0.0], 3, 0.0),
])
def test_empirical_wp_uses_sorted_coupling(a, b, p, expected):
    assert empirical_wp(_sample(a), _sample(b), p) == pytest.approx(expected)


def test_empirical_wp_requires_equal_sizes():
    with pytest.raises(SampleSizeError):
        empirical_wp(_sample([0.0, 1.0]), _sample([0.0, 1.0, 2.0]), 1)
    with pytest.raises(ConfigError):
        empirical_wp(_sample([0.0, 1.0]), _sample([0.0, 1.0]), 0.5)


def _random_samples(seed, count, size=40):
    rng = stream(seed, "test")
    draws = (
        lambda: rng.normal(rng.uniform(-1.0, 1.0), rng.uniform(0.5, 2.0), size),
        lambda: rng.exponential(rng.uniform(0.5, 2.0), size),
        lambda: rng.choice([-1.0, 1.0], size) * rng.uniform(0.0, 3.0),
    )
    return [_sample(draws[int(rng.integers(len(draws)))]()) for _ in range(count)]


@pytest.mark.parametrize("seed", range(50))
def test_empirical_wp_is_a_metric(seed):
    a, b, c = _random_samples(seed, 3)
    for p in (1, 2, 3):
        assert empirical_wp(a, b, p) == pytest.approx(empirical_wp(b, a, p), abs=1e-12)
        assert empirical_wp(a, c, p) <= empirical_wp(a, b, p) + empirical_wp(b, c, p) + 1e-12


@pytest.mark.parametrize("seed", range(50))
def test_empirical_wp_grows_with_p(seed):
    a, b = _random_samples(seed, 2)
    w1, w2, w3 = (empirical_wp(a, b, p) for p in (1, 2, 3))
    assert w1 <= w2 + 1e-12
    assert w2 <= w3 + 1e-12


def test_quantile_grid_is_at_distance_zero():
    s = 1_000
    grid = normal_grid_sample(s)
    assert wp_vs_normal(grid, 2) == pytest.approx(0.0, abs=1e-12)
    assert kolmogorov_vs_normal(grid) <= 1.0 / (2 * s) + 1e-12


def test_shifted_normal():
    a = _shifted_normal()
    for p in (1, 2, 3):
        assert wp_vs_normal(a, p) == pytest.approx(0.5, abs=0.05)
    assert kolmogorov_vs_normal(a) == pytest.approx(0.1974, abs=0.01)


def test_shifted_normal_converges_with_sample_size():
    sizes = (500, 5_000, 50_000)
    errors = []
    for s in sizes:
        deviations = [abs(wp_vs_normal(_shifted_normal(s=s, seed=seed), 1) - 0.5) for seed in range(8)]
        errors.append(np.mean(deviations))
    slope, _ = np.polyfit(np.log(sizes), np.log(errors), 1)
    assert slope < -0.25
    assert errors[-1] < 0.01


def test_zolotarev_lower_bound():
    a = _shifted_normal()
    # E[X^2/2] - 1/2 = 1/8 pour X ~ N(1/2, 1)
    assert zolotarev_lower_bound(a, 2, family=["square_half"]) == pytest.approx(0.125, abs=0.02)
    assert zolotarev_lower_bound(a, 2) >= 0.1
    with pytest.raises(ConfigError):
        zolotarev_lower_bound(a, 2, family=["abs_kink"])
    with pytest.raises(ConfigError):
        zolotarev_lower_bound(a, 4)


def test_zolotarev_diagnostic_keys():
    diag = zolotarev_wp_diagnostic(_shifted_normal(s=5_000), 2)
    assert set(diag) == {"zolotarev_lower", "zolotarev_root", "w2"}
    assert diag["zolotarev_root"] == pytest.approx(diag["zolotarev_lower"] ** 0.5)


def test_small_samples_are_rejected():
    with pytest.raises(SampleSizeError):
        wp_vs_normal(_sample(np.linspace(-1.0, 1.0, 99)), 1)


def test_baseline_floor_shrinks_with_sample_size():
    small = baseline_floor(200, "w1", 7, 0)
    large = baseline_floor(20_000, "w1", 7, 0)
    assert large < small
    assert baseline_floor(200, "w1", 7, 0) == small


def test_unknown_distance():
    with pytest.raises(ConfigError):
        distance_vs_normal(normal_grid_sample(200), "hellinger")
