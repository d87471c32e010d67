"""Moments mixtes, cumulants de W, accumulateurs et sommes de chaines."""

from dataclasses import replace
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest

from src.applications import bernoulli_model, mdep_model, normal_surrogate_model, rademacher_model
from src.config import MonteCarloConfig
from src.dependence import chain_array
from src.errors import ConfigError, ExactModeUnavailableError, UnstandardizedModelError
from src.matching import four_point_law, law_cumulants, law_model
from src.moments import ChainTerm, MomentAccumulator, chain_term_sums, cumulants_of_sum, mixed_moment, run_replicates
from src.moments.accumulator import batch_sizes


# --- Moments mixtes --------------------------------------------------------


def test_rademacher_square_moment_is_one_over_n():
    model = rademacher_model(5)
    estimate = mixed_moment(model, (1, 1), absolute=True, mode="exact")
    assert estimate.is_exact
    assert estimate.exact == Fraction(1, 5)


def test_independent_signed_pair_vanishes():
    estimate = mixed_moment(rademacher_model(5), (1, 2), mode="exact")
    assert estimate.exact == 0


def test_centered_bernoulli_third_moment():
    model = bernoulli_model(100, "0.2")
    estimate = mixed_moment(model, (7, 7, 7), mode="exact")
    assert estimate.exact == Fraction(3, 2000)
    assert estimate.value == pytest.approx(0.0015, abs=1e-15)


def test_shared_noise_covariance_exact_and_mc(app_config):
    model = mdep_model(6, 1)
    exact = mixed_moment(model, (2, 3), mode="exact")
    assert exact.exact == Fraction(1, 22)
    mc = mixed_moment(model, (2, 3), mode="mc", seed=5, config=app_config)
    assert mc.agrees_with(exact.value, k=5)


def test_mixed_moment_ignores_index_order():
    model = mdep_model(5, 2, "bernoulli:0.3", (1, 2, 1))
    for indices, absolute in (((0, 1, 2), False), ((0, 0, 1), False), ((1, 2, 3), True)):
        reference = mixed_moment(model, indices, absolute=absolute, mode="exact").exact
        assert reference != 0
        for order in permutations(indices):
            assert mixed_moment(model, order, absolute=absolute, mode="exact").exact == reference, order


@pytest.mark.parametrize("case", range(20))
def test_exact_and_mc_agree_on_random_models(case, random_small_model, app_config):
    model = random_small_model(case)
    for indices, absolute in (((0, 1), False), ((1, 1, 2), True)):
        exact = mixed_moment(model, indices, absolute=absolute, mode="exact")
        mc = mixed_moment(model, indices, absolute=absolute, mode="mc", seed=case, config=app_config)
        assert mc.agrees_with(exact.value, k=4), (indices, exact.value, mc.value, mc.std_error)


def test_mixed_moment_index_checks():
    model = rademacher_model(3)
    with pytest.raises(ConfigError):
        mixed_moment(model, (0, 3), mode="exact")
    with pytest.raises(ConfigError):
        mixed_moment(model, (), mode="exact")


def test_exact_mode_requires_support():
    with pytest.raises(ExactModeUnavailableError):
        mixed_moment(normal_surrogate_model(3), (0, 0), mode="exact")


# --- Cumulants -------------------------------------------------------------


def test_symmetric_law_has_zero_third_cumulant():
    model = law_model(four_point_law(0))
    kappa3, kappa4 = cumulants_of_sum(model, 4, mode="exact")
    assert kappa3.exact == 0
    assert kappa4.exact == Fraction(-17, 16)


def test_rademacher_fourth_cumulant():
    kappa3, kappa4 = cumulants_of_sum(rademacher_model(4), 4, mode="exact")
    assert kappa3.exact == 0
    assert kappa4.exact == Fraction(-1, 2)


def test_single_draw_law_cumulant_matches_rational_computation():
    law = four_point_law(Fraction(1, 10))
    kappa3, _ = cumulants_of_sum(law_model(law), 3, mode="exact")
    assert kappa3.exact == law_cumulants(law)[2]
    assert kappa3.exact == Fraction(1, 2)


def test_mc_cumulants_agree_with_exact(app_config):
    model = rademacher_model(4)
    kappa3, kappa4 = cumulants_of_sum(model, 4, mode="mc", seed=11, config=app_config)
    assert kappa3.agrees_with(0.0, k=5)
    assert kappa4.agrees_with(-0.5, k=5)


def test_cumulants_require_standardized_model():
    raw = replace(rademacher_model(4), standardized=False)
    with pytest.raises(UnstandardizedModelError):
        cumulants_of_sum(raw, 4, mode="exact")
    with pytest.raises(ConfigError):
        cumulants_of_sum(rademacher_model(4), 5, mode="exact")


def test_third_order_only():
    kappa3, kappa4 = cumulants_of_sum(rademacher_model(4), 3, mode="exact")
    assert kappa3.exact == 0
    assert kappa4 is None


# --- Accumulateurs ---------------------------------------------------------


def test_accumulator_merge_matches_single_pass():
    values = np.random.default_rng(1).normal(size=1001)
    whole = MomentAccumulator()
    whole.add(values)
    left, right = MomentAccumulator(), MomentAccumulator()
    left.add(values[:300])
    right.add(values[300:])
    left.merge(right)
    assert left.count == whole.count
    assert left.mean == pytest.approx(whole.mean, abs=1e-14)
    assert left.variance == pytest.approx(np.var(values, ddof=1), rel=1e-12)


def test_batch_sizes():
    assert batch_sizes(5_000, 2_000) == [2_000, 2_000, 1_000]
    with pytest.raises(ValueError):
        batch_sizes(0, 10)


def test_run_replicates_independent_of_worker_count():
    def batch(index, size):
        return np.random.default_rng(index).normal(size=(size, 2))

    serial = run_replicates(7_000, batch, 2, MonteCarloConfig(workers=1, batch_size=1_000))
    threaded = run_replicates(7_000, batch, 2, MonteCarloConfig(workers=4, batch_size=1_000))
    for a, b in zip(serial, threaded):
        assert a.count == b.count == 7_000
        assert a.mean == b.mean
        assert a.m2 == b.m2


# --- Sommes de chaines -----------------------------------------------------


def test_chain_term_sums_exact():
    model = rademacher_model(3)
    pairs = chain_array(model.neighborhoods, 2)
    ones = np.ones(pairs.shape[0])
    squares = ChainTerm(pairs, ones, ((0, 1),), absolute=True)
    split = ChainTerm(pairs, ones, ((0,), (1,)), absolute=False)
    total, product = chain_term_sums(model, [squares, split], mode="exact")
    assert total.exact == 1
    assert product.exact == 0


def test_chain_term_groups_are_added(app_config):
    model = mdep_model(8, 1)
    triples = chain_array(model.neighborhoods, 3)
    ones = np.ones(triples.shape[0])
    a = ChainTerm(triples, ones, ((0, 1, 2),))
    b = ChainTerm(triples, ones, ((0, 1), (2,)))
    exact_a, exact_b, exact_ab = chain_term_sums(model, [a, b, [a, b]], mode="exact")
    assert exact_ab.exact == exact_a.exact + exact_b.exact

    (mc_ab,) = chain_term_sums(model, [[a, b]], mode="mc", seed=3, config=app_config)
    assert mc_ab.agrees_with(exact_ab.value, k=5)
