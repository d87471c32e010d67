"""
Lois discretes d'appariement des cumulants.

Loi a quatre points: atomes -3/2, -1/2, 1/2, 3/2, E xi = 0, E xi^2 = 1,
E xi^3 = sqrt(n) beta avec n = floor(c2 / beta^2).
Loi a cinq points: atomes -2..2, kappa3(xi) = sqrt(n) kappa3,
kappa4(xi) = n kappa4 avec n = floor(c2'/kappa3^2) ^ floor(c2'/|kappa4|).

Les probabilites melangent sqrt(n) et des rationnels: elles sont tenues
exactement sous la forme a + b sqrt(n).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional

import numpy as np

from ..bounds.theorem1 import iid_wp_bound
from ..config import MatchingConfig, get_config
from ..dependence.checks import standardize
from ..dependence.neighborhoods import singleton_neighborhoods
from ..errors import ConfigError
from ..models import EmpiricalSample, ExactSupport, IndexSet, LocalModel
from ..rng import stream
from ..surd import QuadraticSurd


class ConstructionRegimeError(ConfigError):
    """Parametres hors du regime de construction."""
    pass


def to_fraction(value) -> Fraction:
    """Rationnel exact; les flottants passent par leur ecriture decimale."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"rationnel attendu: {value!r}") from e


@dataclass(frozen=True)
class DiscreteLaw:
    """Loi a support fini, atomes rationnels, probabilites dans Q(sqrt(n))."""

    atoms: tuple[Fraction, ...]
    probs: tuple[QuadraticSurd, ...]
    n_selected: Optional[int] = None
    c2: Optional[Fraction] = None
    kind: str = "custom"
    target: tuple = ()
    # nombre de divisions de c2 par 2 avant faisabilite
    shrink_steps: int = 0

    def __post_init__(self):
        if len(self.atoms) != len(self.probs) or not self.atoms:
            raise ConfigError("atomes et probabilites de longueurs differentes")
        if len(set(self.atoms)) != len(self.atoms):
            raise ConfigError("atomes non distincts")
        for atom, p in zip(self.atoms, self.probs):
            if p.sign() < 0 or p > 1:
                raise ConstructionRegimeError(f"probabilite hors de [0,1] en {atom}: {p}")
        total = QuadraticSurd(0)
        for p in self.probs:
            total = total + p
        if total != 1:
            raise ConfigError(f"probabilites de somme {total}")

    @classmethod
    def point_mass(cls, atom=0) -> "DiscreteLaw":
        return cls((to_fraction(atom),), (QuadraticSurd(1),), kind="point-mass")

    @property
    def is_degenerate(self) -> bool:
        """n non choisi: V_n est remplacee par N(0,1)."""
        return self.n_selected is None

    def float_probs(self) -> np.ndarray:
        probs = np.array([float(p) for p in self.probs])
        return probs / probs.sum()

    def float_atoms(self) -> np.ndarray:
        return np.array([float(a) for a in self.atoms])


def _floor_ratio(c: Fraction, x: Fraction) -> Optional[int]:
    """floor(c / x), None si x = 0 (infini)."""
    if x == 0:
        return None
    return floor(c / x)


def four_point_law(beta, config: Optional[MatchingConfig] = None) -> DiscreteLaw:
    """
    Loi a quatre points pour beta.

    Raises:
        ConstructionRegimeError: |beta| > c1 ou n = floor(c2/beta^2) < 1
    """
    config = config or get_config().matching
    beta = to_fraction(beta)
    atoms = (Fraction(-3, 2), Fraction(-1, 2), Fraction(1, 2), Fraction(3, 2))

    if abs(beta) > config.c1:
        raise ConstructionRegimeError(f"outside construction regime: |beta| = {abs(beta)} > c1 = {config.c1}")

    if beta == 0:
        probs = tuple(QuadraticSurd(p) for p in (Fraction(3, 16), Fraction(5, 16), Fraction(5, 16), Fraction(3, 16)))
        return DiscreteLaw(atoms, probs, None, config.c2, "four-point", (beta,))

    n = _floor_ratio(config.c2, beta * beta)
    if n < 1:
        raise ConstructionRegimeError(
            f"outside construction regime: n = floor(c2/beta^2) = {n} pour beta = {beta}"
        )
    s = QuadraticSurd.sqrt_of(n) * beta
    probs = (
        Fraction(3, 16) - s / 6,
        Fraction(5, 16) + s / 2,
        Fraction(5, 16) - s / 2,
        Fraction(3, 16) + s / 6,
    )
    return DiscreteLaw(atoms, tuple(QuadraticSurd.coerce(p) for p in probs), n, config.c2, "four-point", (beta,))


def _five_point_probs(a: QuadraticSurd, b: Fraction) -> tuple[QuadraticSurd, ...]:
    return (
        Fraction(1, 12) + (-2 * a + b) / 24,
        Fraction(1, 6) + (a - b) / 6,
        QuadraticSurd(Fraction(1, 2) + b / 4),
        Fraction(1, 6) - (a + b) / 6,
        Fraction(1, 12) + (2 * a + b) / 24,
    )


def five_point_law(kappa3, kappa4, config: Optional[MatchingConfig] = None) -> DiscreteLaw:
    """
    Loi a cinq points pour (kappa3, kappa4).

    c2' est divise par 2 tant qu'une probabilite sort de [0,1].

    Raises:
        ConstructionRegimeError: n < 1, ou infaisable avec c2' < shrink_floor
    """
    config = config or get_config().matching
    k3 = to_fraction(kappa3)
    k4 = to_fraction(kappa4)
    atoms = tuple(Fraction(v) for v in (-2, -1, 0, 1, 2))

    if abs(k3) > config.c1 or abs(k4) > config.c1:
        raise ConstructionRegimeError(
            f"outside construction regime: |kappa3|, |kappa4| doivent etre <= c1 = {config.c1}"
        )

    if k3 == 0 and k4 == 0:
        probs = tuple(QuadraticSurd(p) for p in
                      (Fraction(1, 12), Fraction(1, 6), Fraction(1, 2), Fraction(1, 6), Fraction(1, 12)))
        return DiscreteLaw(atoms, probs, None, config.c2_five, "five-point", (k3, k4))

    c = config.c2_five
    steps = 0
    while c >= config.shrink_floor:
        candidates = [x for x in (_floor_ratio(c, k3 * k3), _floor_ratio(c, abs(k4))) if x is not None]
        n = min(candidates)
        if n < 1:
            raise ConstructionRegimeError(
                f"outside construction regime: n = {n} pour kappa3 = {k3}, kappa4 = {k4}"
            )
        a = QuadraticSurd.sqrt_of(n) * k3
        b = n * k4
        probs = tuple(QuadraticSurd.coerce(p) for p in _five_point_probs(a, b))
        if all(p.sign() >= 0 and p <= 1 for p in probs):
            return DiscreteLaw(atoms, probs, n, c, "five-point", (k3, k4), steps)
        c /= 2
        steps += 1

    raise ConstructionRegimeError(
        f"loi a cinq points infaisable: c2' < {config.shrink_floor} pour ({k3}, {k4})"
    )


def law_moments(law: DiscreteLaw, k: int) -> QuadraticSurd:
    """E xi^k exact."""
    total = QuadraticSurd(0)
    for atom, p in zip(law.atoms, law.probs):
        total = total + p * (atom ** k)
    return total


def law_cumulants(law: DiscreteLaw, max_order: int = 4) -> tuple[QuadraticSurd, ...]:
    """(moyenne, variance, kappa3, kappa4) exacts, moments centres.

    kappa3 = m3 et kappa4 = m4 - 3 m2^2 (moments centres).
    """
    if max_order not in (3, 4):
        raise ConfigError(f"max_order doit valoir 3 ou 4 (recu {max_order})")
    mean = law_moments(law, 1)
    central = [QuadraticSurd(0)] * 5
    for atom, p in zip(law.atoms, law.probs):
        d = atom - mean
        power = QuadraticSurd(1)
        for k in range(1, 5):
            power = power * d
            central[k] = central[k] + p * power
    variance = central[2]
    kappa3 = central[3]
    if max_order == 3:
        return mean, variance, kappa3
    kappa4 = central[4] - 3 * variance * variance
    return mean, variance, kappa3, kappa4


def sample_vn(law: DiscreteLaw, samples: int, seed: int) -> EmpiricalSample:
    """Tirages i.i.d. de V_n = n^{-1/2} sum_{i<=n} xi_i (N(0,1) si degeneree)."""
    if samples < 2:
        raise ConfigError(f"au moins 2 tirages requis (recu {samples})")
    rng = stream(seed, "law", 0)
    provenance = f"law:{law.kind}:seed={seed}"
    if law.is_degenerate:
        return EmpiricalSample.from_values(rng.standard_normal(samples), provenance)
    n = law.n_selected
    # Comptage multinomial des atomes: sum xi_i = sum_k N_k a_k
    counts = rng.multinomial(n, law.float_probs(), size=samples)
    values = counts @ law.float_atoms() / np.sqrt(n)
    return EmpiricalSample.from_values(values, provenance)


def lemma3_bound(law: DiscreteLaw) -> float:
    """(sum_{i<=n} E|xi_i/sqrt(n)|^4)^{1/2} pour V_n; 0 si degeneree."""
    if law.is_degenerate:
        return 0.0
    n = law.n_selected
    m4 = float(law_moments(law, 4))
    return iid_wp_bound([m4 / (n * n)] * n, 2)


def law_model(law: DiscreteLaw, depth: int = 5) -> LocalModel:
    """La loi comme modele a un seul terme (support exact)."""
    mean = law_moments(law, 1)
    if mean != 0:
        raise ConfigError(f"loi non centree (moyenne {mean})")
    atoms = law.float_atoms()
    probs = law.float_probs()
    support = ExactSupport(
        base_laws=(tuple(zip(law.atoms, law.probs)),),
        parents=((0,),),
        statistic=lambda i, values: values[0],
    )

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.choice(atoms, size=(size, 1), p=probs)

    model = LocalModel(
        name=f"law-{law.kind}",
        index_set=IndexSet.range(1),
        neighborhoods=singleton_neighborhoods(1, depth),
        sampler=sampler,
        exact_support=support,
        params={"n": 1, "law": law.kind, "target": tuple(str(t) for t in law.target)},
    )
    return standardize(model, "exact")

