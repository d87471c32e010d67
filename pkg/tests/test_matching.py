"""Lois a quatre et cinq points, tirages de V_n."""

from fractions import Fraction
import math

import numpy as np
import pytest

from src.matching import (
    ConstructionRegimeError,
    DiscreteLaw,
    five_point_law,
    four_point_law,
    law_cumulants,
    law_moments,
    lemma3_bound,
    sample_vn,
    to_fraction,
)
from src.surd import exact_sqrt


def _probs(law):
    return tuple(p.to_fraction() for p in law.probs)


def test_symmetric_four_point_law():
    law = four_point_law(0)
    assert law.is_degenerate
    assert _probs(law) == (Fraction(3, 16), Fraction(5, 16), Fraction(5, 16), Fraction(3, 16))
    mean, variance, kappa3, _ = law_cumulants(law)
    assert (mean, variance, kappa3) == (0, 1, 0)


def test_four_point_law_matches_skewness():
    law = four_point_law(Fraction(1, 10))
    assert law.n_selected == 25
    assert _probs(law) == (Fraction(5, 48), Fraction(9, 16), Fraction(1, 16), Fraction(13, 48))
    assert law_moments(law, 1) == 0
    assert law_moments(law, 2) == 1
    assert law_moments(law, 3) == Fraction(1, 2)
    assert law_moments(law, 4) <= Fraction(97, 16)


def test_symmetric_five_point_law():
    law = five_point_law(0, 0)
    assert _probs(law) == (Fraction(1, 12), Fraction(1, 6), Fraction(1, 2), Fraction(1, 6), Fraction(1, 12))
    assert law_cumulants(law) == (0, 1, 0, 0)


def test_five_point_law_matches_skewness():
    law = five_point_law(Fraction(1, 10), 0)
    assert law.n_selected == 10
    mean, variance, kappa3, kappa4 = law_cumulants(law)
    assert mean == 0 and variance == 1
    assert kappa3 == exact_sqrt(10) / 10
    assert kappa4 == 0


def test_five_point_law_matches_kurtosis():
    law = five_point_law(0, Fraction(-1, 20))
    assert law.n_selected == 2
    assert law.shrink_steps == 0
    _, variance, kappa3, kappa4 = law_cumulants(law)
    assert variance == 1
    assert kappa3 == 0
    assert kappa4 == Fraction(-1, 10)


def test_point_mass_cumulants():
    law = DiscreteLaw.point_mass(0)
    assert law_cumulants(law) == (0, 0, 0, 0)


@pytest.mark.parametrize("beta", [2, Fraction(-3, 2), 1])
def test_four_point_law_outside_regime(beta):
    with pytest.raises(ConstructionRegimeError):
        four_point_law(beta)


def test_five_point_law_outside_regime():
    with pytest.raises(ConstructionRegimeError):
        five_point_law(Fraction(1, 2), 0)
    with pytest.raises(ConstructionRegimeError):
        five_point_law(0, 2)


def test_sampled_third_moment():
    sample = sample_vn(four_point_law(Fraction(1, 10)), 200_000, seed=13)
    assert np.mean(sample.values) == pytest.approx(0.0, abs=0.02)
    assert np.mean(sample.values ** 2) == pytest.approx(1.0, abs=0.02)
    # E V_n^3 = E xi^3 / sqrt(n) = beta
    assert np.mean(sample.values ** 3) == pytest.approx(0.1, abs=0.05)


def test_degenerate_law_samples_normal():
    sample = sample_vn(four_point_law(0), 50_000, seed=2)
    assert sample.provenance.startswith("law:four-point")
    assert np.var(sample.values) == pytest.approx(1.0, abs=0.03)
    assert len(np.unique(sample.values)) == sample.size


def test_lemma3_bound():
    assert lemma3_bound(four_point_law(Fraction(1, 10))) == pytest.approx(math.sqrt(31) / 20)
    assert lemma3_bound(four_point_law(0)) == 0.0


@pytest.mark.parametrize("value, expected", [
    ("0.1", Fraction(1, 10)),
    (0.1, Fraction(1, 10)),
    ("-1/20", Fraction(-1, 20)),
    (3, Fraction(3)),
])
def test_to_fraction(value, expected):
    assert to_fraction(value) == expected
