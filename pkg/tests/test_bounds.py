"""Termes beta/gamma, fonctionnelles R_m et bornes derivees."""

from dataclasses import replace
from fractions import Fraction
from itertools import product
import math

import pytest

from src.applications import bernoulli_model, duplicated_pairs_model, mdep_model, rademacher_model
from src.bounds import (
    BoundReport,
    compute_Rm,
    conjecture_terms,
    corollary1_functional,
    enumerate_e_placements,
    iid_wp_bound,
    mdep_bound_functional,
    per_index_moments,
    theorem1_terms,
    theorem3_rate,
    w2_bound_functional,
    wp_conjecture_functional,
)
from src.errors import ConfigError, InsufficientDepthError, UnstandardizedModelError
from src.models import EstimationMode, MomentEstimate
from src.moments import cumulants_of_sum


# --- Modele a paires dupliquees: enumeration naive -------------------------

SCALE = 1 / math.sqrt(8)


def _pair_outcomes():
    for e0, e1 in product((-1, 1), repeat=2):
        yield 0.25, [SCALE * v for v in (e0, e0, e1, e1)]


def _expect(indices, absolute=True):
    total = 0.0
    for prob, x in _pair_outcomes():
        value = math.prod(x[i] for i in indices)
        total += prob * (abs(value) if absolute else value)
    return total


def _chains(length):
    # Tous les voisinages d'une chaine sont le bloc de son premier indice
    for i in range(4):
        block = (2 * (i // 2), 2 * (i // 2) + 1)
        for rest in product(block, repeat=length - 1):
            yield (i,) + rest


def _brute(length, segments, absolute=True):
    return sum(
        math.prod(_expect([chain[p] for p in seg], absolute) for seg in segments)
        for chain in _chains(length)
    )


def test_duplicated_pairs_match_brute_force():
    report = theorem1_terms(duplicated_pairs_model(2), "exact")
    assert report.beta.value == pytest.approx(_brute(3, [(0, 1, 2)], absolute=False), abs=1e-12)
    assert report.gamma1.value == pytest.approx(_brute(4, [(0, 1, 2, 3)]), abs=1e-12)
    assert report.gamma2.value == pytest.approx(_brute(4, [(0, 1), (2, 3)]), abs=1e-12)
    assert report.gamma3.value == pytest.approx(_brute(4, [(0, 1, 2), (3,)]), abs=1e-12)
    assert report.gamma1.exact == Fraction(1, 2)


def test_duplicated_pairs_r3_matches_brute_force():
    placements = [
        [(0, 1, 2, 3, 4)],
        [(0, 1), (2, 3, 4)],
        [(0, 1, 2), (3, 4)],
        [(0, 1, 2, 3), (4,)],
        [(0, 1), (2, 3), (4,)],
    ]
    expected = sum(_brute(5, segs) for segs in placements)
    value = compute_Rm(duplicated_pairs_model(2, depth=4), 3, "exact")
    assert value.value == pytest.approx(expected, abs=1e-12)


# --- theorem1_terms --------------------------------------------------------


def test_rademacher_terms():
    n = 8
    report = theorem1_terms(rademacher_model(n), "exact")
    assert report.beta.exact == 0
    for gamma in (report.gamma1, report.gamma2, report.gamma3):
        assert gamma.exact == Fraction(1, n)
    assert report.gamma_sum_exact == Fraction(3, n)
    assert report.functional_w2 == pytest.approx(math.sqrt(3 / n))


def test_centered_bernoulli_beta():
    report = theorem1_terms(bernoulli_model(100, "0.2"), "exact")
    assert report.beta.exact == Fraction(3, 20)
    assert report.beta.value == pytest.approx(0.15, abs=1e-15)


def test_mc_terms_agree_with_exact(app_config):
    model = mdep_model(6, 1)
    exact = theorem1_terms(model, "exact")
    mc = theorem1_terms(model, "mc", seed=9, config=app_config)
    assert mc.mode == EstimationMode.MC
    for name in ("beta", "gamma1", "gamma2", "gamma3"):
        assert getattr(mc, name).agrees_with(getattr(exact, name).value, k=5), name


def test_theorem1_requires_depth_and_standardization():
    with pytest.raises(InsufficientDepthError):
        theorem1_terms(rademacher_model(4, depth=2), "exact")
    with pytest.raises(UnstandardizedModelError):
        theorem1_terms(replace(rademacher_model(4), standardized=False), "exact")
    with pytest.raises(ConfigError):
        theorem1_terms(rademacher_model(4, depth=6), "exact", p=5)


def test_report_as_dict_columns():
    report = theorem1_terms(rademacher_model(4), "exact", r_orders=(1,), p=1)
    row = report.as_dict()
    assert row["beta"] == 0.0
    assert row["R1"] == pytest.approx(1.0)
    assert row["functional_w1"] == pytest.approx(1.0)
    assert row["term_count"] == report.term_count > 0


# --- Fonctionnelles --------------------------------------------------------


def _report(beta, g1, g2, g3):
    est = MomentEstimate.from_exact
    return BoundReport("synthetic", EstimationMode.EXACT, est(beta), est(g1), est(g2), est(g3))


@pytest.mark.parametrize("terms, expected", [
    ((0, Fraction(1, 8), Fraction(1, 8), Fraction(1, 8)), math.sqrt(3 / 8)),
    ((Fraction(3, 20), Fraction(1, 100), Fraction(1, 100), Fraction(2, 100)), 0.35),
    ((0, 0, 0, 0), 0.0),
])
def test_w2_bound_functional(terms, expected):
    assert w2_bound_functional(_report(*terms)) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("m, expected", [
    (1, 0.2),
    (2, 0.4 + 2 ** 1.5 * 0.1),
])
def test_mdep_bound_functional(m, expected):
    third = [1e-3] * 100
    fourth = [1e-4] * 100
    assert mdep_bound_functional(third, fourth, m) == pytest.approx(expected, rel=1e-12)


def test_mdep_bound_functional_rejects_independent_case():
    with pytest.raises(ConfigError):
        mdep_bound_functional([1e-3], [1e-4], 0)
    with pytest.raises(ConfigError):
        mdep_bound_functional([1e-3], [1e-4, 1e-4], 1)


def test_corollary_functional_matches_per_index_moments():
    model = mdep_model(32, 2)
    third, fourth = per_index_moments(model, "exact")
    expected = mdep_bound_functional([e.value for e in third], [e.value for e in fourth], 2)
    assert corollary1_functional(model, 2, "exact") == pytest.approx(expected, rel=1e-14)


def test_iid_wp_bound():
    n = 64
    assert iid_wp_bound([1 / n ** 2] * n, 2) == pytest.approx(n ** -0.5)
    assert iid_wp_bound([n ** -1.5] * n, 1) == pytest.approx(n ** -0.5)
    assert iid_wp_bound([0.0], 2) == 0.0
    with pytest.raises(ConfigError):
        iid_wp_bound([], 2)
    with pytest.raises(ConfigError):
        iid_wp_bound([1.0], 0.5)


def test_theorem3_rate():
    assert theorem3_rate(100) == pytest.approx(0.1)
    with pytest.raises(ConfigError):
        theorem3_rate(0)


# --- Placements et R_m -----------------------------------------------------


@pytest.mark.parametrize("m, count", [(1, 2), (2, 3), (3, 5), (4, 8), (5, 13), (6, 21), (7, 34), (8, 55)])
def test_placement_counts_follow_fibonacci(m, count):
    assert len(enumerate_e_placements(m)) == count


def test_small_placements():
    assert [pl.breaks for pl in enumerate_e_placements(1)] == [(), (2,)]
    assert [pl.breaks for pl in enumerate_e_placements(2)] == [(), (2,), (3,)]
    assert {pl.breaks for pl in enumerate_e_placements(3)} == {(), (2,), (3,), (4,), (2, 4)}
    assert enumerate_e_placements(2)[1].segments == ((0, 1), (2, 3))
    assert enumerate_e_placements(2)[2].segments == ((0, 1, 2), (3,))


def test_placement_order_limits():
    with pytest.raises(ConfigError):
        enumerate_e_placements(0)
    with pytest.raises(ConfigError):
        enumerate_e_placements(13)


def test_rademacher_r1():
    assert compute_Rm(rademacher_model(16), 1, "exact").exact == Fraction(1, 2)


@pytest.mark.parametrize("build", [
    lambda: rademacher_model(6),
    lambda: bernoulli_model(5, "0.3"),
    lambda: mdep_model(6, 1),
    lambda: duplicated_pairs_model(3),
])
def test_r2_equals_gamma_sum(build):
    model = build()
    report = theorem1_terms(model, "exact", r_orders=(2,))
    assert report.r_m[2].exact == report.gamma_sum_exact
    assert compute_Rm(model, 2, "exact").exact == report.gamma_sum_exact


@pytest.mark.parametrize("build", [
    lambda: rademacher_model(6),
    lambda: bernoulli_model(5, "0.3"),
    lambda: mdep_model(6, 1),
])
def test_conjecture_functional_dominates_w2_functional(build):
    model = build()
    report = theorem1_terms(model, "exact")
    assert wp_conjecture_functional(model, 2, "exact") >= report.functional_w2


def test_conjecture_terms_rademacher():
    n = 16
    model = rademacher_model(n)
    terms = conjecture_terms(model, 2, "exact")
    assert terms[1].exact == Fraction(1, 2)
    assert terms[2].exact == Fraction(3, n)
    assert wp_conjecture_functional(model, 2, "exact") == pytest.approx(0.5 + math.sqrt(3 / n))
    report = theorem1_terms(model, "exact", p=2)
    assert report.functional_wp == pytest.approx(0.5 + math.sqrt(3 / n))


def test_exact_rm_limits():
    model = rademacher_model(4, depth=6)
    with pytest.raises(ConfigError):
        compute_Rm(model, 5, "exact")
    with pytest.raises(ConfigError):
        conjecture_terms(model, 5, "exact")


@pytest.mark.parametrize("case", range(50))
def test_r2_equals_gamma_sum_on_random_models(case, random_small_model):
    model = random_small_model(case)
    report = theorem1_terms(model, "exact")
    assert compute_Rm(model, 2, "exact").exact == report.gamma_sum_exact


@pytest.mark.parametrize("build", [
    lambda: rademacher_model(5),
    lambda: bernoulli_model(6, "0.2"),
    lambda: mdep_model(6, 1),
    lambda: mdep_model(5, 2, "bernoulli:0.3", (1, 2, 1)),
    lambda: duplicated_pairs_model(3),
])
def test_third_cumulant_equals_beta(build):
    model = build()
    kappa3, _ = cumulants_of_sum(model, 3, mode="exact")
    assert kappa3.exact == theorem1_terms(model, "exact").beta.exact
