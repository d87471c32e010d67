"""
Solution de l'equation de Stein f'(w) - w f(w) = h(w) - Nh et verifications
numeriques associees (residu, regularite des derivees).
"""

from dataclasses import dataclass
from typing import Optional, Sequence
import math
import warnings

import numpy as np
from scipy import integrate

from ..config import SteinConfig, get_config
from ..errors import ConfigError, NumericalError
from .normal import QuadratureError, hermite_projection, hermite_rule, normal_functional
from .testfunctions import TestFunction, as_test_function


class DerivativeInstabilityError(NumericalError):
    """Derivees numeriques instables."""
    pass


@dataclass
class SteinSolution:
    """f_h evaluee sur une grille."""

    h: TestFunction
    grid: np.ndarray
    values: np.ndarray
    nh: float
    tol: float
    quadrature: str = "quad sur [0, inf), queue la plus proche selon le signe de w"

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def residual(self, step: float = 1e-2, config: Optional[SteinConfig] = None) -> float:
        return stein_residual(self.h, self.grid, step=step, nh=self.nh, tol=self.tol, config=config)


def _quad(func, a: float, b: float, tol: float) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = integrate.quad(func, a, b, epsabs=tol, epsrel=1e-12, limit=400)
    if not math.isfinite(value) or err > max(1e-6, 1e-6 * abs(value)):
        raise QuadratureError(f"troncature de queue: erreur estimee {err:.2g} sur [{a}, {b}]")
    return value


def solve_stein(
    h,
    w: float,
    tol: Optional[float] = None,
    nh: Optional[float] = None,
    branch: Optional[str] = None,
    config: Optional[SteinConfig] = None,
) -> float:
    """
    f_h(w) par quadrature adaptative.

    w <= 0: f(w) = int_0^inf (h(w-t) - Nh) e^{wt - t^2/2} dt   (queue basse)
    w > 0:  f(w) = -int_0^inf (h(w+t) - Nh) e^{-wt - t^2/2} dt (queue haute)

    Args:
        h: Fonction test (nom, TestFunction ou callable)
        w: Abscisse
        tol: Tolerance absolue (config par defaut)
        nh: Nh deja calcule
        branch: "lower" ou "upper" pour forcer une forme
    """
    config = config or get_config().stein
    tf = as_test_function(h)
    tol = config.tol if tol is None else tol
    nh = normal_functional(tf, config) if nh is None else nh
    branch = branch or ("lower" if w <= 0 else "upper")
    func = tf.func

    if branch == "lower":
        integrand = lambda t: (float(func(w - t)) - nh) * math.exp(w * t - 0.5 * t * t)
        cuts = sorted(w - k for k in tf.kinks if w - k > 0)
        sign = 1.0
    elif branch == "upper":
        integrand = lambda t: (float(func(w + t)) - nh) * math.exp(-w * t - 0.5 * t * t)
        cuts = sorted(k - w for k in tf.kinks if k - w > 0)
        sign = -1.0
    else:
        raise ConfigError(f"branche inconnue: {branch!r} (lower|upper)")

    bounds = [0.0, *cuts, np.inf]
    total = 0.0
    for a, b in zip(bounds, bounds[1:]):
        total += _quad(integrand, a, b, tol)
    return sign * total


def solve_on_grid(h, grid: Sequence[float], tol: Optional[float] = None,
                  config: Optional[SteinConfig] = None) -> SteinSolution:
    """f_h sur toute une grille, Nh calcule une seule fois."""
    config = config or get_config().stein
    tf = as_test_function(h)
    tol = config.tol if tol is None else tol
    nh = normal_functional(tf, config)
    grid = np.asarray(grid, dtype=float)
    values = np.array([solve_stein(tf, w, tol, nh, config=config) for w in grid])
    return SteinSolution(tf, grid, values, nh, tol)


def richardson_derivative(func, x: float, k: int, step: float) -> float:
    """Derivee k-ieme par differences centrales, extrapolation (h, h/2)."""
    stencils = {
        1: ((-1, -0.5), (1, 0.5)),
        2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
        3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
        4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
    }
    if k not in stencils:
        raise ConfigError(f"ordre de derivation non supporte: {k}")

    def central(s: float) -> float:
        return sum(c * float(func(x + o * s)) for o, c in stencils[k]) / s ** k

    coarse = central(step)
    fine = central(step / 2)
    return (4.0 * fine - coarse) / 3.0


def _h_derivative(tf: TestFunction, k: int, w: float, step: float) -> float:
    analytic = tf.derivative(k)
    if analytic is not None:
        return float(analytic(w))
    return richardson_derivative(tf.func, w, k, step)


def stein_derivative(
    h,
    w: float,
    order: int,
    nh: Optional[float] = None,
    f_value: Optional[float] = None,
    step: Optional[float] = None,
    config: Optional[SteinConfig] = None,
) -> float:
    """
    f_h^(order)(w) via l'equation derivee
    f^(k+1) = w f^(k) + k f^(k-1) + h^(k).
    """
    config = config or get_config().stein
    tf = as_test_function(h)
    if order < 0 or order > 4:
        raise ConfigError(f"ordre de derivation dans 0..4 (recu {order})")
    step = config.fd_step if step is None else step
    nh = normal_functional(tf, config) if nh is None else nh
    f0 = solve_stein(tf, w, nh=nh, config=config) if f_value is None else f_value
    if order == 0:
        return f0

    derivs = [f0, w * f0 + float(tf.func(w)) - nh]
    for k in range(1, order):
        derivs.append(w * derivs[k] + k * derivs[k - 1] + _h_derivative(tf, k, w, step))
    value = derivs[order]
    if not math.isfinite(value):
        raise DerivativeInstabilityError(f"f^({order})({w}) non fini")
    return value


def stein_residual(
    h,
    grid: Sequence[float],
    step: float = 1e-2,
    nh: Optional[float] = None,
    tol: Optional[float] = None,
    config: Optional[SteinConfig] = None,
) -> float:
    """max |f'(w) - w f(w) - h(w) + Nh| sur la grille, f' par Richardson."""
    config = config or get_config().stein
    tf = as_test_function(h)
    nh = normal_functional(tf, config) if nh is None else nh
    worst = 0.0
    for w in np.asarray(grid, dtype=float):
        f = lambda x: solve_stein(tf, x, tol, nh, config=config)
        fprime = richardson_derivative(f, w, 1, step)
        worst = max(worst, abs(fprime - w * f(w) - float(tf.func(w)) + nh))
    return worst


@dataclass(frozen=True)
class LipschitzCheck:
    """Quotient de differences de f^(p) et stabilite sous raffinement."""

    order: int
    step: float
    quotient: float
    refined_quotient: float
    ratio: float
    violation: bool


def _max_quotient(tf: TestFunction, order: int, lo: float, hi: float, step: float,
                  nh: float, config: SteinConfig) -> float:
    grid = np.arange(lo, hi + 0.5 * step, step)
    values = np.array([
        stein_derivative(tf, w, order, nh=nh, config=config) for w in grid
    ])
    return float(np.max(np.abs(np.diff(values))) / step)


def derivative_lipschitz_check(
    h,
    order: int,
    grid: tuple[float, float] = (-3.0, 3.0),
    step: Optional[float] = None,
    config: Optional[SteinConfig] = None,
) -> LipschitzCheck:
    """
    Max des quotients |f^(p)(x) - f^(p)(y)| / |x - y| entre points voisins,
    recalcule avec un pas divise par deux. Un quotient qui croit d'un facteur
    superieur a blowup_ratio signale une violation (h hors de Lambda_p).
    """
    config = config or get_config().stein
    if order not in (2, 3):
        raise ConfigError(f"ordre 2 ou 3 attendu (recu {order})")
    tf = as_test_function(h)
    step = config.grid_step if step is None else step
    lo, hi = grid
    nh = normal_functional(tf, config)

    coarse = _max_quotient(tf, order, lo, hi, step, nh, config)
    fine = _max_quotient(tf, order, lo, hi, step / 2, nh, config)
    ratio = fine / coarse if coarse > 0 else (math.inf if fine > 0 else 1.0)
    return LipschitzCheck(
        order=order,
        step=step,
        quotient=coarse,
        refined_quotient=fine,
        ratio=ratio,
        violation=not math.isfinite(fine) or (fine > config.quotient_floor and ratio > config.blowup_ratio),
    )


@dataclass(frozen=True)
class ProjectionCheck:
    """Nf'', Nf''' et Ng'' par projections de Hermite et par quadrature directe."""

    nf2: float
    nf3: float
    ng2: float
    nf2_quadrature: float
    nf3_quadrature: float

    @property
    def max_discrepancy(self) -> float:
        return max(abs(self.nf2 - self.nf2_quadrature), abs(self.nf3 - self.nf3_quadrature))


def expansion_constants(h, config: Optional[SteinConfig] = None) -> tuple[float, float, float]:
    """
    (Nf'', Nf''', Ng'') avec g solution de Stein pour f'' recentree.

    Nf'' = -E[h He3]/3, Nf''' = -E[h He4]/4, Ng'' = -E[f'' He3]/3 = E[h He6]/18.
    """
    tf = as_test_function(h)
    nf2 = -hermite_projection(tf, 3, config) / 3.0
    nf3 = -hermite_projection(tf, 4, config) / 4.0
    ng2 = hermite_projection(tf, 6, config) / 18.0
    for value in (nf2, nf3, ng2):
        if not math.isfinite(value):
            raise DerivativeInstabilityError("projection de Hermite non finie")
    return nf2, nf3, ng2


def hermite_projection_check(h, order: int = 32, config: Optional[SteinConfig] = None) -> ProjectionCheck:
    """Compare les projections a la quadrature de f'' et f''' calcules numeriquement."""
    config = config or get_config().stein
    tf = as_test_function(h)
    nf2, nf3, ng2 = expansion_constants(tf, config)
    nh = normal_functional(tf, config)
    nodes, weights = hermite_rule(order)
    f_values = [solve_stein(tf, w, nh=nh, config=config) for w in nodes]
    d2 = np.array([stein_derivative(tf, w, 2, nh=nh, f_value=f, config=config)
                   for w, f in zip(nodes, f_values)])
    d3 = np.array([stein_derivative(tf, w, 3, nh=nh, f_value=f, config=config)
                   for w, f in zip(nodes, f_values)])
    return ProjectionCheck(nf2, nf3, ng2, float(weights @ d2), float(weights @ d3))
