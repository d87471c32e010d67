"""
Types du domaine: ensembles d'indices, modeles localement dependants,
estimations de moments et echantillons empiriques.
"""

from dataclasses import dataclass, field, replace
from enum import Enum as PyEnum
from fractions import Fraction
from math import prod
from pathlib import Path
from typing import Any, Callable, Optional, Sequence, TYPE_CHECKING
import math

import numpy as np

from .errors import ConfigError, SampleSizeError
from .surd import QuadraticSurd

if TYPE_CHECKING:
    from .dependence.neighborhoods import NeighborhoodSystem


class EstimationMode(PyEnum):
    """Mode d'estimation des moments."""
    EXACT = "exact"
    MC = "mc"

    @classmethod
    def parse(cls, value) -> "EstimationMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError as e:
            raise ConfigError(f"mode inconnu: {value!r} (exact|mc)") from e


# sampler(rng, size) -> tableau (size, N) des valeurs brutes centrees Y_i
Sampler = Callable[[np.random.Generator, int], np.ndarray]

# sum_sampler(rng, size) -> tableau (size,) de S = somme des Y_i
SumSampler = Callable[[np.random.Generator, int], np.ndarray]

# statistic(i, valeurs des variables de base parentes) -> Y_i centre
Statistic = Callable[[int, tuple], Fraction]


@dataclass(frozen=True)
class IndexSet:
    """Ensemble fini d'indices 0..N-1 avec etiquettes opaques."""

    labels: tuple

    def __post_init__(self):
        if len(self.labels) == 0:
            raise ConfigError("ensemble d'indices vide")
        if len(set(self.labels)) != len(self.labels):
            raise ConfigError("etiquettes d'indices non uniques")

    @classmethod
    def range(cls, size: int) -> "IndexSet":
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class ExactSupport:
    """Support exact factorise.

    Les variables de base sont independantes, chacune de loi finie
    (atomes rationnels). Y_i est une fonction deterministe de ses variables
    de base parentes. Les probabilites peuvent etre des QuadraticSurd
    (lois d'appariement).
    """

    base_laws: tuple[tuple[tuple[Fraction, Any], ...], ...]
    parents: tuple[tuple[int, ...], ...]
    statistic: Statistic

    # Var(S) brute en forme close, si connue
    raw_variance: Optional[Fraction] = None

    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        for k, law in enumerate(self.base_laws):
            if not law:
                raise ConfigError(f"variable de base {k}: loi vide")
            total = sum((p for _, p in law), Fraction(0))
            if total != 1:
                raise ConfigError(f"variable de base {k}: probabilites de somme {total}")
        n_base = len(self.base_laws)
        for i, pa in enumerate(self.parents):
            if any(b < 0 or b >= n_base for b in pa):
                raise ConfigError(f"indice {i}: parent hors des variables de base")

    @property
    def size(self) -> int:
        return len(self.parents)

    def outcome_count(self, base_vars: Optional[Sequence[int]] = None) -> int:
        """Nombre d'issues conjointes sur les variables de base donnees (toutes par defaut)."""
        if base_vars is None:
            base_vars = range(len(self.base_laws))
        return prod(len(self.base_laws[b]) for b in base_vars)


@dataclass(frozen=True)
class MomentEstimate:
    """Moment estime: valeur, erreur standard, mode."""

    value: float
    std_error: float
    mode: EstimationMode
    n_replicates: int = 0
    exact: Optional[QuadraticSurd] = None

    def __post_init__(self):
        if self.mode == EstimationMode.EXACT and self.std_error != 0:
            raise ValueError("mode exact avec erreur standard non nulle")
        if self.mode == EstimationMode.MC and self.n_replicates < 1:
            raise ValueError("mode mc sans replicat")
        if self.std_error < 0:
            raise ValueError("erreur standard negative")

    @classmethod
    def from_exact(cls, value) -> "MomentEstimate":
        surd = QuadraticSurd.coerce(value)
        return cls(value=float(surd), std_error=0.0, mode=EstimationMode.EXACT, exact=surd)

    @classmethod
    def from_mc(cls, mean: float, std_error: float, n_replicates: int) -> "MomentEstimate":
        return cls(
            value=float(mean),
            std_error=float(std_error),
            mode=EstimationMode.MC,
            n_replicates=int(n_replicates),
        )

    @property
    def is_exact(self) -> bool:
        return self.mode == EstimationMode.EXACT

    def agrees_with(self, truth: float, k: float = 4.0) -> bool:
        """|estimation - verite| <= k * SE (egalite a 1e-12 en mode exact)."""
        if self.is_exact:
            return math.isclose(self.value, truth, rel_tol=0.0, abs_tol=1e-12)
        return abs(self.value - truth) <= k * self.std_error

    def __str__(self):
        if self.is_exact:
            return f"{self.value:.10g} (exact)"
        return f"{self.value:.6g} +/- {self.std_error:.2g} (R={self.n_replicates})"


@dataclass(frozen=True)
class LocalModel:
    """Champ localement dependant: W = scale * somme des Y_i."""

    name: str
    index_set: IndexSet
    neighborhoods: "NeighborhoodSystem"
    sampler: Sampler
    exact_support: Optional[ExactSupport] = None
    sum_sampler: Optional[SumSampler] = None

    # W = scale * S; scale_sq rationnel quand la standardisation est exacte
    scale: float = 1.0
    scale_sq: Optional[Fraction] = None
    standardized: bool = False
    variance_estimate: Optional[MomentEstimate] = None

    # Parametres descriptifs (n, m, p, ...) pour les rapports
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.neighborhoods.size != self.index_set.size:
            raise ConfigError(
                f"{self.name}: voisinages sur {self.neighborhoods.size} indices, "
                f"ensemble de {self.index_set.size}"
            )
        if self.exact_support is not None and self.exact_support.size != self.index_set.size:
            raise ConfigError(f"{self.name}: support exact de taille incompatible")
        if self.scale <= 0:
            raise ConfigError(f"{self.name}: scale doit etre > 0")

    @property
    def size(self) -> int:
        return self.index_set.size

    @property
    def has_exact_support(self) -> bool:
        return self.exact_support is not None

    def with_scale(
        self,
        scale: float,
        scale_sq: Optional[Fraction] = None,
        variance_estimate: Optional[MomentEstimate] = None,
    ) -> "LocalModel":
        return replace(
            self,
            scale=scale,
            scale_sq=scale_sq,
            standardized=True,
            variance_estimate=variance_estimate,
        )

    def exact_scale_power(self, k: int) -> QuadraticSurd:
        """scale^k exact (scale_sq^(k//2), fois sqrt(scale_sq) si k impair)."""
        scale_sq = self.scale_sq if self.scale_sq is not None else Fraction(1)
        if self.scale_sq is None and self.scale != 1.0:
            raise ConfigError(f"{self.name}: echelle non exacte")
        power = QuadraticSurd(scale_sq ** (k // 2))
        if k % 2:
            power = power * QuadraticSurd.sqrt_of(scale_sq)
        return power

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Tableau (size, N) des X_i = scale * Y_i."""
        values = np.asarray(self.sampler(rng, size), dtype=float)
        if values.shape != (size, self.size):
            raise ConfigError(
                f"{self.name}: sampler renvoie {values.shape}, attendu {(size, self.size)}"
            )
        return self.scale * values

    def draw_sums(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Tableau (size,) des realisations de W."""
        if self.sum_sampler is not None:
            raw = np.asarray(self.sum_sampler(rng, size), dtype=float)
        else:
            raw = np.asarray(self.sampler(rng, size), dtype=float).sum(axis=1)
        return self.scale * raw


@dataclass(frozen=True, eq=False)
class EmpiricalSample:
    """Echantillon 1-D trie, avec provenance."""

    values: np.ndarray
    provenance: str = "external"

    def __post_init__(self):
        if self.values.ndim != 1:
            raise SampleSizeError("echantillon 1-D attendu")
        if self.values.size < 2:
            raise SampleSizeError(f"echantillon de taille {self.values.size} (minimum 2)")
        if not np.all(np.isfinite(self.values)):
            raise SampleSizeError("echantillon avec valeurs non finies")

    @classmethod
    def from_values(cls, values, provenance: str = "external") -> "EmpiricalSample":
        arr = np.sort(np.asarray(values, dtype=float).ravel())
        arr.setflags(write=False)
        return cls(values=arr, provenance=provenance)

    @classmethod
    def from_file(cls, path: Path) -> "EmpiricalSample":
        """Lit un fichier texte: un flottant par ligne (lignes vides ignorees)."""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"fichier introuvable: {path}")
        values = []
        with open(path) as f:
            for lineno, line in enumerate(f, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    values.append(float(line))
                except ValueError as e:
                    raise ConfigError(f"{path}:{lineno}: flottant attendu, lu {line!r}") from e
        return cls.from_values(values, provenance=f"file:{path.name}")

    @property
    def size(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.size
