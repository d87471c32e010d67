"""
Fonctionnelles R_m et borne W_p conjecturee.

R_m somme, sur les chaines emboitees i1, i2 in A_i1, ..., i_{m+2} in
A_{i1..i_{m+1}}, les produits de moments absolus obtenus en placant des
esperances dans |X_i1 X_i2 ... X_i{m+2}|. La premiere esperance couvre
toujours X_i1 X_i2; deux ouvertures d'esperance sont separees par au moins
deux facteurs.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from ..config import AppConfig
from ..dependence.neighborhoods import NeighborhoodSystem, chain_array
from ..errors import ConfigError
from ..models import EstimationMode, LocalModel, MomentEstimate
from ..moments.estimators import ChainTerm, chain_term_sums


MAX_PLACEMENT_ORDER = 12
MAX_EXACT_ORDER = 4
MAX_P = 4


@dataclass(frozen=True)
class EPlacement:
    """Placement des esperances pour R_m.

    breaks: facteurs b (numerotes 1..m+2) apres lesquels une nouvelle
    esperance s'ouvre; b dans {2..m+1}, ecarts >= 2.
    """

    m: int
    breaks: tuple[int, ...]

    def __post_init__(self):
        if any(b < 2 or b > self.m + 1 for b in self.breaks):
            raise ConfigError(f"coupure hors de 2..{self.m + 1}: {self.breaks}")
        if any(b2 - b1 < 2 for b1, b2 in zip(self.breaks, self.breaks[1:])):
            raise ConfigError(f"coupures trop proches: {self.breaks}")

    @property
    def segments(self) -> tuple[tuple[int, ...], ...]:
        """Positions (0-based) de chaque esperance dans la chaine."""
        starts = (0,) + self.breaks
        ends = self.breaks + (self.m + 2,)
        return tuple(tuple(range(s, e)) for s, e in zip(starts, ends))


@lru_cache(maxsize=None)
def enumerate_e_placements(m: int) -> tuple[EPlacement, ...]:
    """Tous les placements admissibles pour R_m, ordre lexicographique."""
    if not 1 <= m <= MAX_PLACEMENT_ORDER:
        raise ConfigError(f"m doit etre dans 1..{MAX_PLACEMENT_ORDER} (recu {m})")

    found: list[tuple[int, ...]] = []

    def extend(breaks: tuple[int, ...], next_min: int) -> None:
        found.append(breaks)
        for b in range(next_min, m + 2):
            extend(breaks + (b,), b + 2)

    extend((), 2)
    return tuple(EPlacement(m, b) for b in sorted(found))


def placement_terms(system: NeighborhoodSystem, m: int) -> list[ChainTerm]:
    """Un ChainTerm par placement, sur les chaines de longueur m+2."""
    placements = enumerate_e_placements(m)
    system.require_depth(m + 1, f"R_{m}")
    chains = chain_array(system, m + 2)
    ones = np.ones(chains.shape[0])
    return [ChainTerm(chains, ones, pl.segments) for pl in placements]


def compute_Rm(
    model: LocalModel,
    m: int,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> MomentEstimate:
    """R_m pour le modele (voisinages jusqu'au niveau m+1)."""
    mode = EstimationMode.parse(mode)
    if mode == EstimationMode.EXACT and m > MAX_EXACT_ORDER:
        raise ConfigError(f"mode exact limite a m <= {MAX_EXACT_ORDER} (recu {m})")
    (estimate,) = chain_term_sums(
        model, [placement_terms(model.neighborhoods, m)], mode, seed, replicates, config
    )
    return estimate


def conjecture_terms(
    model: LocalModel,
    p: int,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> dict[int, MomentEstimate]:
    """R_1..R_p sur un meme flux."""
    if not 1 <= p <= MAX_P:
        raise ConfigError(f"p doit etre dans 1..{MAX_P} (recu {p})")
    mode = EstimationMode.parse(mode)
    groups = [placement_terms(model.neighborhoods, m) for m in range(1, p + 1)]
    estimates = chain_term_sums(model, groups, mode, seed, replicates, config)
    return dict(zip(range(1, p + 1), estimates))


def wp_conjecture_functional(
    model: LocalModel,
    p: int,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> float:
    """sum_{m=1}^p R_m^(1/m), sans la constante C_p."""
    terms = conjecture_terms(model, p, mode, seed, replicates, config)
    return sum(max(terms[m].value, 0.0) ** (1.0 / m) for m in range(1, p + 1))
