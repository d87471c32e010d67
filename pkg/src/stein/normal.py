"""
Esperances sous la loi normale standard: Nh = E h(Z), projections de
Hermite, fonction de repartition et quantile.
"""

from functools import lru_cache
from typing import Callable, Optional
import math
import warnings

import numpy as np
from numpy.polynomial import hermite_e
from scipy import integrate, special

from ..config import SteinConfig, get_config
from ..errors import NumericalError


SQRT_2PI = math.sqrt(2.0 * math.pi)


class QuadratureError(NumericalError):
    """Quadrature non convergente."""
    pass


@lru_cache(maxsize=16)
def hermite_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Noeuds et poids de Gauss-Hermite (poids e^{-x^2/2}) normalises a 1."""
    nodes, weights = hermite_e.hermegauss(order)
    weights = weights / SQRT_2PI
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def evaluate(h: Callable, x: np.ndarray) -> np.ndarray:
    """h sur un tableau; repli element par element si h n'est pas vectorisee."""
    try:
        values = np.asarray(h(x), dtype=float)
        if values.shape == x.shape:
            return values
    except (TypeError, ValueError):
        pass
    return np.array([float(h(float(v))) for v in x.ravel()]).reshape(x.shape)


def normal_cdf(x):
    """Phi(x)."""
    return special.ndtr(x)


def normal_quantile(q):
    """Phi^{-1}(q)."""
    return special.ndtri(q)


def _adaptive(h: Callable, tol: float) -> float:
    """Repli: quad adaptative coupee en 0 (les fonctions a coin y sont traitees)."""
    total = 0.0
    for a, b in ((-np.inf, 0.0), (0.0, np.inf)):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            value, err = integrate.quad(
                lambda x: float(h(x)) * math.exp(-0.5 * x * x) / SQRT_2PI,
                a, b, epsabs=tol / 4, epsrel=1e-13, limit=400,
            )
        if not math.isfinite(value) or err > tol:
            raise QuadratureError(f"quadrature adaptative: erreur estimee {err:.2g} > {tol:.2g}")
        total += value
    return total


def normal_functional(h: Callable, config: Optional[SteinConfig] = None) -> float:
    """
    Nh = E h(Z) par Gauss-Hermite d'ordres croissants.

    Si deux ordres successifs s'accordent a tol pres, la derniere valeur est
    retenue; sinon repli sur une quadrature adaptative coupee en 0.

    Raises:
        QuadratureError: aucune methode ne converge
    """
    config = config or get_config().stein
    previous = None
    for order in config.hermite_orders:
        nodes, weights = hermite_rule(order)
        value = float(np.dot(weights, evaluate(h, nodes)))
        if previous is not None and abs(value - previous) <= config.tol:
            return value
        previous = value
    return _adaptive(h, config.tol)


def hermite_projection(h: Callable, k: int, config: Optional[SteinConfig] = None) -> float:
    """E[h(Z) He_k(Z)]."""
    coeffs = np.zeros(k + 1)
    coeffs[k] = 1.0
    return normal_functional(lambda x: evaluate(h, np.atleast_1d(x)).reshape(np.shape(x))
                             * hermite_e.hermeval(x, coeffs), config)
