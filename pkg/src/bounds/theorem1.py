"""
Fonctionnelles de borne en distance W2 sous dependance locale.

Toutes les fonctionnelles sont rapportees sans constante universelle: la
borne effective est C fois la valeur calculee, C n'etant pas connue.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence
import math

import numpy as np

from ..config import AppConfig, get_config
from ..dependence.neighborhoods import beta_chain_arrays, chain_array
from ..errors import ConfigError, UnstandardizedModelError
from ..models import EstimationMode, LocalModel, MomentEstimate
from ..moments.accumulator import run_replicates
from ..moments.estimators import ChainTerm, chain_term_sums, exact_mixed_moment
from ..rng import stream
from ..surd import QuadraticSurd
from .conjecture import placement_terms


# Segments des trois termes gamma sur les quadruplets (i, j, k, l)
GAMMA_SEGMENTS = {
    "gamma1": ((0, 1, 2, 3),),
    "gamma2": ((0, 1), (2, 3)),
    "gamma3": ((0, 1, 2), (3,)),
}


@dataclass
class BoundReport:
    """Termes beta, gamma et R_m d'un modele, et fonctionnelles assemblees."""

    model_name: str
    mode: EstimationMode
    beta: MomentEstimate
    gamma1: MomentEstimate
    gamma2: MomentEstimate
    gamma3: MomentEstimate
    r_m: dict[int, MomentEstimate] = field(default_factory=dict)
    functional_w2: float = 0.0
    functional_wp: Optional[float] = None
    p: Optional[int] = None
    term_count: int = 0

    @property
    def gamma_sum(self) -> float:
        return self.gamma1.value + self.gamma2.value + self.gamma3.value

    @property
    def gamma_sum_exact(self) -> Optional[QuadraticSurd]:
        if self.mode != EstimationMode.EXACT:
            return None
        return self.gamma1.exact + self.gamma2.exact + self.gamma3.exact

    def as_dict(self) -> dict:
        row = {
            "model": self.model_name,
            "mode": self.mode.value,
            "beta": self.beta.value,
            "beta_se": self.beta.std_error,
            "gamma1": self.gamma1.value,
            "gamma1_se": self.gamma1.std_error,
            "gamma2": self.gamma2.value,
            "gamma2_se": self.gamma2.std_error,
            "gamma3": self.gamma3.value,
            "gamma3_se": self.gamma3.std_error,
            "functional_w2": self.functional_w2,
            "term_count": self.term_count,
        }
        for m, est in sorted(self.r_m.items()):
            row[f"R{m}"] = est.value
            row[f"R{m}_se"] = est.std_error
        if self.functional_wp is not None:
            row[f"functional_w{self.p}"] = self.functional_wp
        return row


def theorem1_terms(
    model: LocalModel,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    r_orders: Sequence[int] = (),
    p: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> BoundReport:
    """
    Calcule beta, gamma1, gamma2, gamma3 (et R_m sur demande).

    beta = sum_i sum_{j,k in A_i} E X_iX_jX_k
           + 2 sum_i sum_{j in A_i} sum_{k in A_ij \\ A_i} E X_iX_jX_k
    gamma1..gamma3 somment sur les chaines i, j in A_i, k in A_ij, l in A_ijk.

    Args:
        model: Modele standardise, voisinages jusqu'au niveau 3
        mode: exact ou mc (nombres aleatoires communs pour tous les termes)
        r_orders: Ordres m de R_m a joindre au rapport
        p: Si donne, remplit functional_wp = sum_{m<=p} R_m^(1/m)

    Returns:
        BoundReport
    """
    mode = EstimationMode.parse(mode)
    if not model.standardized:
        raise UnstandardizedModelError(f"{model.name}: standardiser avant theorem1_terms")
    system = model.neighborhoods
    system.require_depth(3, "gamma1..gamma3")

    if p is not None and not 1 <= p <= 4:
        raise ConfigError(f"p doit etre dans 1..4 (recu {p})")
    orders = sorted(set(r_orders) | (set(range(1, p + 1)) if p else set()))
    if orders:
        system.require_depth(max(orders) + 1, f"R_{max(orders)}")

    beta_chains, beta_weights = beta_chain_arrays(system)
    quads = chain_array(system, 4)
    ones = np.ones(quads.shape[0])

    groups: list = [ChainTerm(beta_chains, beta_weights, ((0, 1, 2),), absolute=False)]
    groups += [ChainTerm(quads, ones, segs) for segs in GAMMA_SEGMENTS.values()]
    groups += [placement_terms(system, m) for m in orders]

    estimates = chain_term_sums(model, groups, mode, seed, replicates, config)
    beta, g1, g2, g3 = estimates[:4]
    r_m = dict(zip(orders, estimates[4:]))

    report = BoundReport(
        model_name=model.name,
        mode=mode,
        beta=beta,
        gamma1=g1,
        gamma2=g2,
        gamma3=g3,
        r_m=r_m,
        p=p,
        term_count=int(beta_chains.shape[0] + quads.shape[0]),
    )
    report.functional_w2 = w2_bound_functional(report)
    if p is not None:
        report.functional_wp = math.fsum(
            max(r_m[m].value, 0.0) ** (1.0 / m) for m in range(1, p + 1)
        )
    return report


def w2_bound_functional(report: BoundReport) -> float:
    """|beta| + (gamma1 + gamma2 + gamma3)^(1/2).

    La borne W2 est C fois cette valeur, C constante universelle inconnue.
    """
    return abs(report.beta.value) + math.sqrt(max(report.gamma_sum, 0.0))


def mdep_bound_functional(
    third_moments: Sequence[float],
    fourth_moments: Sequence[float],
    m: int,
) -> float:
    """m^2 * sum E|X_i|^3 + m^(3/2) * (sum E X_i^4)^(1/2)."""
    if len(third_moments) != len(fourth_moments):
        raise ConfigError("listes de moments de longueurs differentes")
    if m < 1:
        raise ConfigError(f"m doit etre >= 1 (recu {m}); m = 0 est le cas independant")
    if any(x < 0 for x in third_moments) or any(x < 0 for x in fourth_moments):
        raise ConfigError("moments absolus negatifs")
    return m * m * math.fsum(third_moments) + m ** 1.5 * math.sqrt(math.fsum(fourth_moments))


def per_index_moments(
    model: LocalModel,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> tuple[list[MomentEstimate], list[MomentEstimate]]:
    """E|X_i|^3 et E X_i^4 pour chaque indice."""
    mode = EstimationMode.parse(mode)
    if mode == EstimationMode.EXACT:
        third = [MomentEstimate.from_exact(exact_mixed_moment(model, (i,) * 3, absolute=True))
                 for i in range(model.size)]
        fourth = [MomentEstimate.from_exact(exact_mixed_moment(model, (i,) * 4))
                  for i in range(model.size)]
        return third, fourth

    config = config or get_config()
    replicates = replicates or config.montecarlo.replicates

    def batch(index: int, size: int) -> np.ndarray:
        x = model.draw(stream(seed, "moment", index, 0), size)
        return np.hstack([np.abs(x) ** 3, x ** 4])

    accs = run_replicates(replicates, batch, 2 * model.size, config.montecarlo)
    estimates = [acc.estimate() for acc in accs]
    return estimates[:model.size], estimates[model.size:]


def corollary1_functional(
    model: LocalModel,
    m: int,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> float:
    """Fonctionnelle m-dependante assemblee a partir des moments du modele."""
    third, fourth = per_index_moments(model, mode, seed, replicates, config)
    return mdep_bound_functional([e.value for e in third], [e.value for e in fourth], m)


def iid_wp_bound(abs_moments_p_plus_2: Sequence[float], p: float) -> float:
    """(sum E|xi_i|^(p+2))^(1/p) pour des termes independants."""
    if len(abs_moments_p_plus_2) == 0:
        raise ConfigError("liste de moments vide")
    if p < 1:
        raise ConfigError(f"p doit etre >= 1 (recu {p})")
    if any(x < 0 for x in abs_moments_p_plus_2):
        raise ConfigError("moments absolus negatifs")
    return math.fsum(abs_moments_p_plus_2) ** (1.0 / p)


def theorem3_rate(n: int) -> float:
    """Vitesse C/sqrt(n) des U-statistiques non degenerees (sans constante)."""
    if n < 1:
        raise ConfigError(f"n doit etre >= 1 (recu {n})")
    return 1.0 / math.sqrt(n)
