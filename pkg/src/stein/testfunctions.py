"""
Bibliotheque de fonctions test avec appartenance declaree aux classes
Lambda_p (derivee d'ordre p-1 lipschitzienne de constante 1).
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special

from ..errors import ConfigError


@dataclass(frozen=True)
class TestFunction:
    """Fonction test vectorisee avec derivees analytiques optionnelles."""

    __test__ = False

    name: str
    func: Callable
    # derivees d'ordre 1, 2, 3 (None: differences finies)
    derivatives: tuple = ()
    classes: frozenset = field(default_factory=frozenset)
    # abscisses ou une derivee saute (coupures de quadrature)
    kinks: tuple[float, ...] = ()
    note: str = ""

    def __call__(self, x):
        return self.func(x)

    def derivative(self, k: int) -> Optional[Callable]:
        if k == 0:
            return self.func
        if 1 <= k <= len(self.derivatives):
            return self.derivatives[k - 1]
        return None

    def in_class(self, p: int) -> bool:
        return p in self.classes


def _sigmoid(x):
    return special.expit(x)


LIBRARY: dict[str, TestFunction] = {
    "square_half": TestFunction(
        "square_half",
        lambda x: 0.5 * np.square(x),
        (lambda x: np.asarray(x, dtype=float), lambda x: np.ones_like(np.asarray(x, dtype=float)),
         lambda x: np.zeros_like(np.asarray(x, dtype=float))),
        frozenset({2, 3}),
        note="w^2/2: h' = w, h'' = 1 constante",
    ),
    "cube_sixth": TestFunction(
        "cube_sixth",
        lambda x: np.power(x, 3) / 6.0,
        (lambda x: 0.5 * np.square(x), lambda x: np.asarray(x, dtype=float),
         lambda x: np.ones_like(np.asarray(x, dtype=float))),
        frozenset({3}),
        note="w^3/6: h'' = w, 1-lipschitzienne",
    ),
    "cosine": TestFunction(
        "cosine",
        np.cos,
        (lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin),
        frozenset({2, 3}),
        note="cos: toutes les derivees bornees par 1",
    ),
    "sine": TestFunction(
        "sine",
        np.sin,
        (np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x)),
        frozenset({2, 3}),
        note="sin: toutes les derivees bornees par 1",
    ),
    "softplus": TestFunction(
        "softplus",
        lambda x: np.logaddexp(0.0, x),
        (_sigmoid,
         lambda x: _sigmoid(x) * (1.0 - _sigmoid(x)),
         lambda x: _sigmoid(x) * (1.0 - _sigmoid(x)) * (1.0 - 2.0 * _sigmoid(x))),
        frozenset({2, 3}),
        note="charniere lissee log(1+e^w): |h''| <= 1/4, |h'''| <= 0.1",
    ),
    "abs_kink": TestFunction(
        "abs_kink",
        np.abs,
        (np.sign,),
        frozenset(),
        kinks=(0.0,),
        note="|w|: h' saute en 0, hors de Lambda_2 (controle negatif)",
    ),
}


def get_test_function(name: str) -> TestFunction:
    try:
        return LIBRARY[name]
    except KeyError:
        raise ConfigError(
            f"fonction test inconnue: {name!r} (disponibles: {', '.join(sorted(LIBRARY))})"
        ) from None


def family(p: int) -> list[TestFunction]:
    """Membres declares de Lambda_p."""
    return [tf for tf in LIBRARY.values() if tf.in_class(p)]


def as_test_function(h) -> TestFunction:
    """Accepte un nom, une TestFunction ou un callable quelconque."""
    if isinstance(h, TestFunction):
        return h
    if isinstance(h, str):
        return get_test_function(h)
    if callable(h):
        return TestFunction(getattr(h, "__name__", "custom"), h)
    raise ConfigError(f"fonction test invalide: {h!r}")
