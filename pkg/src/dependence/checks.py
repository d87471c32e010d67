"""
Verifications structurelles et standardisation des modeles locaux.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional
import math

import numpy as np

from ..config import AppConfig, get_config
from ..errors import DegenerateSumError, ExactModeUnavailableError, SampleSizeError
from ..models import EstimationMode, LocalModel, MomentEstimate
from ..moments.accumulator import run_replicates
from ..moments.estimators import exact_mixed_moment, exact_raw_variance
from ..rng import stream
from ..surd import QuadraticSurd
from .neighborhoods import NeighborhoodSystem


@dataclass(frozen=True)
class Violation:
    """Violation d'un invariant de voisinage."""

    # membership | nesting | out_of_range | missing
    kind: str
    chain: tuple
    detail: str = ""


@dataclass
class ValidationReport:
    """Resultat de validate_neighborhoods (vide si tout est correct)."""

    violations: list[Violation] = field(default_factory=list)
    chains_checked: int = 0

    @property
    def is_empty(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def by_kind(self, kind: str) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]


def validate_neighborhoods(system: NeighborhoodSystem) -> ValidationReport:
    """
    Parcourt toutes les chaines jusqu'a la profondeur declaree et signale:
    - membership: i absent de A_i
    - nesting: A_{c[:-1]} non inclus dans A_c
    - out_of_range: voisinage sortant de l'ensemble d'indices
    - missing: voisinage non defini
    """
    report = ValidationReport()

    def check(chain: tuple, parent: Optional[tuple]) -> None:
        report.chains_checked += 1
        members = system.lookup(chain)
        if members is None:
            report.violations.append(Violation("missing", chain, "voisinage non defini"))
            return

        outside = [k for k in members if k < 0 or k >= system.size]
        if outside:
            report.violations.append(
                Violation("out_of_range", chain, f"indices hors de I: {outside}")
            )
        members = tuple(k for k in members if 0 <= k < system.size)

        if len(chain) == 1 and chain[0] not in members:
            report.violations.append(Violation("membership", chain, f"{chain[0]} absent de A_{chain[0]}"))
        if parent is not None:
            lost = sorted(set(parent) - set(members))
            if lost:
                report.violations.append(
                    Violation("nesting", chain, f"elements de A_{chain[:-1]} absents: {lost}")
                )

        if len(chain) < system.depth:
            for k in members:
                check(chain + (k,), members)

    for i in range(system.size):
        check((i,), None)
    return report


@dataclass(frozen=True)
class IndependenceCheck:
    """Covariance studentisee entre X_i et la somme hors de A_i."""

    index: int
    z: float
    covariance: float
    std_error: float
    mode: EstimationMode
    replicates: int = 0
    degenerate: bool = False

    @property
    def passed(self) -> bool:
        return not self.degenerate and abs(self.z) <= 4.0


def empirical_independence_check(
    model: LocalModel,
    i: int,
    replicates: int = 10_000,
    seed: int = 0,
    mode=EstimationMode.MC,
    config: Optional[AppConfig] = None,
) -> IndependenceCheck:
    """Test de (LD1) pour l'indice i: z = cov(X_i, somme hors A_i) / SE."""
    mode = EstimationMode.parse(mode)
    outside = sorted(set(range(model.size)) - set(model.neighborhoods.neighborhood((i,))))

    if mode == EstimationMode.EXACT:
        variance = exact_mixed_moment(model, (i, i))
        if variance == 0:
            return IndependenceCheck(i, math.nan, 0.0, 0.0, mode, degenerate=True)
        cov = QuadraticSurd(0)
        for j in outside:
            cov = cov + exact_mixed_moment(model, (i, j))
        z = 0.0 if cov == 0 else math.copysign(math.inf, float(cov))
        return IndependenceCheck(i, z, float(cov), 0.0, mode)

    if replicates < 100:
        raise SampleSizeError(f"au moins 100 replicats requis (recu {replicates})")
    config = config or get_config()
    cols = np.asarray(outside, dtype=np.int64)

    def batch(index: int, size: int) -> np.ndarray:
        x = model.draw(stream(seed, "independence", index), size)
        xi = x[:, i]
        rest = x[:, cols].sum(axis=1) if cols.size else np.zeros(size)
        return np.column_stack([xi, rest, xi * rest, xi * xi])

    acc_x, acc_y, acc_xy, acc_xx = run_replicates(replicates, batch, 4, config.montecarlo)
    var_x = acc_xx.mean - acc_x.mean ** 2
    if var_x <= 0 or acc_x.variance == 0:
        return IndependenceCheck(i, math.nan, 0.0, 0.0, mode, replicates, degenerate=True)

    cov = acc_xy.mean - acc_x.mean * acc_y.mean
    se = acc_xy.std_error
    if se == 0:
        # Complement vide ou constant: covariance nulle par construction
        return IndependenceCheck(i, 0.0, cov, 0.0, mode, replicates)
    return IndependenceCheck(i, cov / se, cov, se, mode, replicates)


def standardize(
    model: LocalModel,
    mode=EstimationMode.EXACT,
    precision: float = 1e-9,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> LocalModel:
    """
    Retourne le modele avec scale tel que Var(W) = 1.

    Mode exact: Var(S) rationnelle (forme close ou somme sur les paires),
    scale_sq = 1/Var(S). Mode mc: Var(W) estimee; l'echelle n'est modifiee
    que si l'ecart a 1 depasse max(precision, 4 SE).
    """
    mode = EstimationMode.parse(mode)

    if mode == EstimationMode.EXACT:
        if model.exact_support is None:
            raise ExactModeUnavailableError(f"{model.name}: pas de support exact")
        raw = QuadraticSurd.coerce(exact_raw_variance(model.exact_support))
        if not raw.is_rational:
            raise ExactModeUnavailableError(f"{model.name}: variance irrationnelle {raw}")
        variance = raw.to_fraction()
        if variance <= 0:
            raise DegenerateSumError(f"{model.name}: degenerate sum (Var(S) = {variance})")
        scale_sq = 1 / variance
        return model.with_scale(
            math.sqrt(scale_sq),
            scale_sq=Fraction(scale_sq),
            variance_estimate=MomentEstimate.from_exact(variance),
        )

    config = config or get_config()
    replicates = replicates or config.montecarlo.sigma_replicates

    def batch(index: int, size: int) -> np.ndarray:
        w = model.draw_sums(stream(seed, "sigma", index), size)
        return np.column_stack([w, w * w])

    acc_w, acc_w2 = run_replicates(replicates, batch, 2, config.montecarlo)
    variance = acc_w2.mean - acc_w.mean ** 2
    if variance <= 0:
        raise DegenerateSumError(f"{model.name}: degenerate sum (Var(W) estimee {variance:.3g})")

    estimate = MomentEstimate.from_mc(variance, acc_w2.std_error, acc_w2.count)
    if model.standardized and abs(variance - 1.0) <= max(precision, 4.0 * acc_w2.std_error):
        return model.with_scale(model.scale, model.scale_sq, estimate)
    return model.with_scale(model.scale / math.sqrt(variance), None, estimate)
