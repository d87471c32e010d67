"""Equation de Stein, derivees, constantes de developpement et residus."""

from dataclasses import replace
import math

import numpy as np
import pytest

from src.applications import normal_surrogate_model, rademacher_model
from src.errors import ConfigError, UnstandardizedModelError
from src.stein import (
    LIBRARY,
    derivative_lipschitz_check,
    expansion_constants,
    expansion_residual,
    family,
    get_test_function,
    hermite_projection_check,
    normal_cdf,
    normal_functional,
    normal_quantile,
    solve_on_grid,
    solve_stein,
    stein_derivative,
    stein_residual,
)


GRID = np.linspace(-3.0, 3.0, 13)


# --- Loi normale: valeurs de reference --------------------------------------

# Phi(x) a 16 chiffres significatifs
CDF_REFERENCE = [
    (-8.0, 6.220960574271785e-16),
    (-6.0, 9.865876450376946e-10),
    (-5.0, 2.866515718791939e-07),
    (-3.0, 1.3498980316300946e-03),
    (-1.96, 2.4997895148220435e-02),
    (-1.0, 1.5865525393145707e-01),
    (0.0, 0.5),
    (0.5, 6.914624612740131e-01),
    (1.0, 8.413447460685429e-01),
    (2.0, 9.772498680518208e-01),
    (3.0, 9.986501019683699e-01),
    (8.0, 1.0),
]

# Phi^{-1}(q)
QUANTILE_REFERENCE = [
    (1e-10, -6.361340902404056),
    (0.001, -3.090232306167814),
    (0.025, -1.959963984540054),
    (0.05, -1.6448536269514729),
    (0.5, 0.0),
    (0.9, 1.2815515655446004),
    (0.975, 1.959963984540054),
    (0.99, 2.3263478740408408),
    (0.999, 3.090232306167814),
]


@pytest.mark.parametrize("x, expected", CDF_REFERENCE)
def test_normal_cdf_reference_values(x, expected):
    assert normal_cdf(x) == pytest.approx(expected, abs=1e-10)
    if x < -4.0:
        assert normal_cdf(x) == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("q, expected", QUANTILE_REFERENCE)
def test_normal_quantile_reference_values(q, expected):
    assert normal_quantile(q) == pytest.approx(expected, abs=1e-10)


def test_normal_cdf_vectorized():
    x = np.array([value for value, _ in CDF_REFERENCE])
    assert normal_cdf(x) + normal_cdf(-x) == pytest.approx(np.ones_like(x), abs=1e-15)


# --- Nh et solutions explicites --------------------------------------------


@pytest.mark.parametrize("h, expected", [
    (lambda x: np.square(x), 1.0),
    (lambda x: np.power(x, 3), 0.0),
    (np.abs, math.sqrt(2.0 / math.pi)),
])
def test_normal_functional(h, expected):
    assert normal_functional(h) == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("h, solution, tol", [
    (lambda x: np.asarray(x, dtype=float), lambda w: -1.0, 1e-8),
    (lambda x: np.square(x), lambda w: -w, 1e-6),
    (lambda x: np.power(x, 3), lambda w: -(w * w + 2.0), 1e-6),
])
def test_closed_form_solutions(h, solution, tol):
    for w in GRID:
        assert solve_stein(h, w) == pytest.approx(solution(w), abs=tol), w


def test_both_branches_agree_near_zero():
    lower = solve_stein("square_half", 0.5, branch="lower")
    upper = solve_stein("square_half", 0.5, branch="upper")
    assert lower == pytest.approx(upper, abs=1e-8)
    assert upper == pytest.approx(-0.25, abs=1e-8)


def test_unknown_branch():
    with pytest.raises(ConfigError):
        solve_stein("cosine", 0.0, branch="middle")


@pytest.mark.parametrize("name", ["square_half", "cube_sixth", "cosine", "sine", "softplus"])
def test_residual_is_small(name):
    assert stein_residual(name, np.linspace(-4.0, 4.0, 9)) <= 1e-6


def test_solution_on_grid():
    grid = np.linspace(-2.0, 2.0, 5)
    solution = solve_on_grid("square_half", grid)
    assert solution.nh == pytest.approx(0.5, abs=1e-10)
    assert solution.values == pytest.approx(-grid / 2.0, abs=1e-8)
    assert solution.sup_norm == pytest.approx(1.0, abs=1e-8)
    assert solution.residual() <= 1e-6


def test_first_derivative_from_recursion():
    assert stein_derivative("square_half", 1.5, 1) == pytest.approx(-0.5, abs=1e-8)


def test_derivative_order_limit():
    with pytest.raises(ConfigError):
        stein_derivative("cosine", 0.0, 5)


def test_unknown_test_function():
    with pytest.raises(ConfigError):
        get_test_function("tangent")


# --- Regularite ------------------------------------------------------------


def test_smooth_function_is_stable_under_refinement():
    check = derivative_lipschitz_check("cosine", 2, grid=(-1.0, 1.0), step=0.05)
    assert not check.violation
    assert check.ratio == pytest.approx(1.0, abs=0.2)


def test_kink_is_flagged():
    check = derivative_lipschitz_check("abs_kink", 2, grid=(-1.0, 1.0), step=0.05)
    assert check.violation
    assert check.refined_quotient > check.quotient


def test_vanishing_derivative_is_not_flagged():
    # f = -w/2, f'' nul: les quotients restent au niveau du bruit
    check = derivative_lipschitz_check("square_half", 2, grid=(-1.0, 1.0), step=0.05)
    assert not check.violation


def test_lipschitz_check_order():
    with pytest.raises(ConfigError):
        derivative_lipschitz_check("cosine", 4)


# --- Constantes de developpement -------------------------------------------


def test_expansion_constants_of_cube():
    nf2, nf3, ng2 = expansion_constants("cube_sixth")
    assert nf2 == pytest.approx(-1.0 / 3.0, abs=1e-10)
    assert nf3 == pytest.approx(0.0, abs=1e-10)
    assert ng2 == pytest.approx(0.0, abs=1e-10)


def test_expansion_constants_of_even_polynomials():
    assert expansion_constants("square_half") == pytest.approx((0.0, 0.0, 0.0), abs=1e-10)
    _, nf3, _ = expansion_constants(lambda x: np.power(x, 4) / 24.0)
    assert nf3 == pytest.approx(-0.25, abs=1e-10)


def test_projections_match_quadrature():
    check = hermite_projection_check("cube_sixth")
    assert check.nf2 == pytest.approx(-1.0 / 3.0, abs=1e-10)
    assert check.max_discrepancy < 1e-5


def test_library_classes():
    names = {tf.name for tf in family(2)}
    assert {"square_half", "cosine", "sine", "softplus"} <= names
    assert "abs_kink" not in names
    assert {"square_half", "cube_sixth"} <= {tf.name for tf in family(3)}
    assert LIBRARY["abs_kink"].kinks == (0.0,)


# --- Residus ---------------------------------------------------------------


def test_second_order_residual_on_normal_sum(app_config):
    result = expansion_residual(
        normal_surrogate_model(8), "cosine", order=2, mode="mc",
        seed=21, samples=20_000, config=app_config,
    )
    assert result.components["Nf2"] == pytest.approx(0.0, abs=1e-10)
    assert result.lhs <= 5.0 * result.lhs_std_error


def test_third_order_residual_below_functional():
    result = expansion_residual(rademacher_model(16, depth=4), "cosine", order=3, mode="exact", seed=5)
    assert result.components["kappa4"] == pytest.approx(-0.125)
    assert result.components["R1"] == pytest.approx(0.5)
    assert result.lhs <= result.rhs
    assert result.ratio < 1.0


def test_third_order_ratio_stays_bounded_as_n_grows():
    ratios = []
    for n in (16, 64, 256):
        result = expansion_residual(
            rademacher_model(n, depth=4), "cube_sixth", order=3, mode="exact",
            seed=9, samples=50_000,
        )
        assert result.components["kappa3"] == 0.0
        assert result.components["kappa4"] == pytest.approx(-2.0 / n)
        assert result.lhs <= result.rhs, n
        ratios.append(result.ratio)
    assert max(ratios) < 1.0


def test_residual_arguments():
    with pytest.raises(ConfigError):
        expansion_residual(rademacher_model(4), "cosine", order=4, mode="exact")
    raw = replace(rademacher_model(4), standardized=False)
    with pytest.raises(UnstandardizedModelError):
        expansion_residual(raw, "cosine", order=2, mode="exact")
