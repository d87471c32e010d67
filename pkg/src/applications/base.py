"""
Lois de base i.i.d. des applications (bruit des moyennes mobiles,
echantillons des U-statistiques).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..errors import ConfigError
from ..matching.laws import to_fraction


@dataclass(frozen=True)
class BaseLaw:
    """Loi finie (atomes et probabilites rationnels) ou normale standard."""

    name: str
    atoms: Optional[tuple[Fraction, ...]] = None
    probs: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        if self.atoms is None:
            if self.name != "normal":
                raise ConfigError(f"loi continue inconnue: {self.name}")
            return
        if self.probs is None or len(self.atoms) != len(self.probs):
            raise ConfigError(f"{self.name}: atomes et probabilites incompatibles")
        if any(p < 0 for p in self.probs) or sum(self.probs) != 1:
            raise ConfigError(f"{self.name}: probabilites invalides")

    @property
    def is_finite(self) -> bool:
        return self.atoms is not None

    @property
    def mean(self) -> Fraction:
        if not self.is_finite:
            return Fraction(0)
        return sum((a * p for a, p in zip(self.atoms, self.probs)), Fraction(0))

    @property
    def variance(self) -> Fraction:
        if not self.is_finite:
            return Fraction(1)
        mu = self.mean
        return sum(((a - mu) ** 2 * p for a, p in zip(self.atoms, self.probs)), Fraction(0))

    def law(self) -> tuple[tuple[Fraction, Fraction], ...]:
        if not self.is_finite:
            raise ConfigError(f"{self.name}: pas de support fini")
        return tuple(zip(self.atoms, self.probs))

    def sample(self, rng: np.random.Generator, shape) -> np.ndarray:
        if not self.is_finite:
            return rng.standard_normal(shape)
        atoms = np.array([float(a) for a in self.atoms])
        probs = np.array([float(p) for p in self.probs])
        if len(atoms) == 2 and probs[0] == probs[1]:
            return atoms[rng.integers(0, 2, size=shape)]
        return rng.choice(atoms, size=shape, p=probs / probs.sum())


def rademacher() -> BaseLaw:
    return BaseLaw("rademacher", (Fraction(-1), Fraction(1)), (Fraction(1, 2), Fraction(1, 2)))


def bernoulli(q) -> BaseLaw:
    q = to_fraction(q)
    if not 0 < q < 1:
        raise ConfigError(f"q doit etre dans (0,1) (recu {q})")
    return BaseLaw(f"bernoulli({q})", (Fraction(0), Fraction(1)), (1 - q, q))


def finite(atoms: Sequence, probs: Sequence, name: str = "finite") -> BaseLaw:
    return BaseLaw(name, tuple(to_fraction(a) for a in atoms), tuple(to_fraction(p) for p in probs))


def normal() -> BaseLaw:
    return BaseLaw("normal")


def parse_base_law(spec) -> BaseLaw:
    """'rademacher', 'normal', 'bernoulli:0.2' ou une BaseLaw."""
    if isinstance(spec, BaseLaw):
        return spec
    text = str(spec).strip().lower()
    if text == "rademacher":
        return rademacher()
    if text == "normal":
        return normal()
    if text.startswith("bernoulli"):
        _, _, q = text.partition(":")
        if not q:
            raise ConfigError("bernoulli:<q> attendu")
        return bernoulli(q)
    raise ConfigError(f"loi de base inconnue: {spec!r} (rademacher|normal|bernoulli:<q>)")
