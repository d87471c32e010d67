"""Voisinages emboites, controle d'independance et standardisation."""

from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from src.applications import mdep_model, normal_surrogate_model, rademacher_model
from src.dependence import (
    ExplicitNeighborhoods,
    FootprintNeighborhoods,
    empirical_independence_check,
    iter_chains,
    singleton_neighborhoods,
    standardize,
    validate_neighborhoods,
)
from src.errors import DegenerateSumError, ExactModeUnavailableError, InsufficientDepthError
from src.models import EstimationMode


def test_mdep_neighborhoods_are_nested():
    model = mdep_model(10, 2)
    report = validate_neighborhoods(model.neighborhoods)
    assert report.is_empty
    assert report.chains_checked > 10


def test_singleton_neighborhoods_are_nested():
    assert validate_neighborhoods(singleton_neighborhoods(5)).is_empty


def test_missing_member_in_second_level_is_reported():
    system = ExplicitNeighborhoods.materialize(mdep_model(10, 2).neighborhoods, depth=2)
    broken = system.with_override((0, 1), (1,))
    report = validate_neighborhoods(broken)
    assert len(report) == 1
    (violation,) = report.by_kind("nesting")
    assert violation.chain == (0, 1)


def test_membership_and_range_violations():
    report = validate_neighborhoods(ExplicitNeighborhoods(2, 1, {(0,): (1,), (1,): (1, 7)}))
    assert [v.chain for v in report.by_kind("membership")] == [(0,)]
    assert [v.chain for v in report.by_kind("out_of_range")] == [(1,)]


def test_undefined_neighborhood_is_reported():
    report = validate_neighborhoods(ExplicitNeighborhoods(2, 2, {(0,): (0,), (1,): (1,), (0, 0): (0,)}))
    assert [v.chain for v in report.by_kind("missing")] == [(1, 1)]


def test_footprint_union_rule_for_moving_average():
    system = mdep_model(12, 1).neighborhoods
    assert system.neighborhood((5,)) == (4, 5, 6)
    assert system.neighborhood((5, 6)) == (4, 5, 6, 7)
    assert system.neighborhood((5, 6, 7)) == (4, 5, 6, 7, 8)


def test_footprint_lazy_matches_eager(app_config):
    footprints = [(i, i + 1) for i in range(30)]
    eager = FootprintNeighborhoods(footprints, depth=2)
    app_config.limits.eager_limit = 0
    lazy = FootprintNeighborhoods(footprints, depth=2, config=app_config.limits)
    for i in range(30):
        assert eager.neighborhood((i,)) == lazy.neighborhood((i,))


def test_chains_require_depth():
    system = singleton_neighborhoods(4, depth=2)
    assert len(list(iter_chains(system, 3))) == 4
    with pytest.raises(InsufficientDepthError):
        list(iter_chains(system, 4))


def test_independence_check_passes_on_iid(app_config):
    check = empirical_independence_check(rademacher_model(20), 0, replicates=10_000, seed=1, config=app_config)
    assert check.passed
    assert abs(check.z) <= 4.0


def test_independence_check_detects_truncated_neighborhoods(app_config):
    model = mdep_model(10, 2)
    truncated = replace(model, neighborhoods=singleton_neighborhoods(10))
    check = empirical_independence_check(truncated, 0, replicates=20_000, seed=2, config=app_config)
    assert not check.passed
    assert check.z > 4.0


def test_independence_check_exact():
    check = empirical_independence_check(rademacher_model(6), 0, mode="exact")
    assert check.covariance == 0.0
    assert check.passed

    truncated = replace(mdep_model(6, 1), neighborhoods=singleton_neighborhoods(6))
    assert not empirical_independence_check(truncated, 2, mode="exact").passed


def test_standardize_rademacher_scale():
    model = rademacher_model(16)
    assert model.standardized
    assert model.scale_sq == Fraction(1, 16)
    assert model.scale == pytest.approx(0.25)


def test_standardize_is_idempotent():
    model = rademacher_model(9)
    again = standardize(model, "exact")
    assert again.scale_sq == model.scale_sq


def test_standardize_mc_keeps_standardized_scale(app_config):
    model = normal_surrogate_model(4)
    checked = standardize(model, EstimationMode.MC, seed=3, config=app_config)
    assert checked.scale == model.scale
    assert checked.variance_estimate.agrees_with(1.0, k=5)


def test_standardize_mc_rescales_raw_model(app_config):
    raw = replace(rademacher_model(25), scale=1.0, scale_sq=None, standardized=False)
    model = standardize(raw, EstimationMode.MC, seed=4, config=app_config)
    w = model.draw_sums(np.random.default_rng(0), 20_000)
    assert model.scale == pytest.approx(0.2, rel=0.03)
    assert np.var(w) == pytest.approx(1.0, rel=0.05)


def test_standardize_degenerate_sum():
    with pytest.raises(DegenerateSumError):
        mdep_model(4, 1, coefficients=(0, 0))


def test_standardize_exact_requires_support():
    with pytest.raises(ExactModeUnavailableError):
        standardize(normal_surrogate_model(4), "exact")
