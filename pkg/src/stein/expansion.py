"""
Residus des developpements asymptotiques de E h(W) autour de Nh
(ordre 2 avec beta, ordre 3 avec kappa3 et kappa4).
"""

from dataclasses import dataclass, field
from typing import Optional
import math

import numpy as np

from ..config import AppConfig, get_config
from ..errors import ConfigError, UnstandardizedModelError
from ..models import EmpiricalSample, EstimationMode, LocalModel
from ..moments.accumulator import MomentAccumulator
from ..moments.estimators import cumulants_of_sum
from ..rng import stream
from .normal import evaluate, normal_functional
from .solver import expansion_constants
from .testfunctions import as_test_function


@dataclass
class ExpansionResidual:
    """Cote gauche |E h(W) - Nh + corrections| et fonctionnelle de droite."""

    order: int
    lhs: float
    lhs_std_error: float
    rhs: float
    components: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        if self.rhs <= 0:
            return math.inf if self.lhs > 0 else 0.0
        return self.lhs / self.rhs


def _sample_w(model: LocalModel, samples: int, seed: int) -> np.ndarray:
    return model.draw_sums(stream(seed, "sample", 0), samples)


def expansion_residual(
    model: LocalModel,
    h,
    order: int = 2,
    mode=EstimationMode.MC,
    seed: int = 0,
    samples: int = 100_000,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> ExpansionResidual:
    """
    Ordre 2: lhs = |E h(W) - Nh + (beta/2) Nf''|,
             rhs = |beta| W2_hat + gamma1 + gamma2 + gamma3.
    Ordre 3: lhs = |E h(W) - Nh + (k3/2) Nf'' + (k4/6) Nf''' - (k3^2/4) Ng''|,
             rhs = (R1^2 + R2) W3_hat + R1 R2 + R3.

    E h(W) et W_p_hat sont estimes sur `samples` realisations de W; les termes
    beta, gamma, R_m et cumulants suivent `mode`.
    """
    # imports locaux: bounds et distances dependent de ce paquet
    from ..bounds.theorem1 import theorem1_terms
    from ..bounds.conjecture import conjecture_terms
    from ..distances.wasserstein import wp_vs_normal

    if order not in (2, 3):
        raise ConfigError(f"ordre 2 ou 3 attendu (recu {order})")
    if not model.standardized:
        raise UnstandardizedModelError(f"{model.name}: standardiser avant le developpement")
    config = config or get_config()
    tf = as_test_function(h)

    w = _sample_w(model, samples, seed)
    acc = MomentAccumulator()
    acc.add(evaluate(tf.func, w))
    nh = normal_functional(tf, config.stein)
    nf2, nf3, ng2 = expansion_constants(tf, config.stein)
    sample = EmpiricalSample.from_values(w, provenance=f"seed={seed},model={model.name}")

    if order == 2:
        report = theorem1_terms(model, mode, seed, replicates, config=config)
        beta = report.beta.value
        w2 = wp_vs_normal(sample, 2)
        lhs = abs(acc.mean - nh + 0.5 * beta * nf2)
        rhs = abs(beta) * w2 + report.gamma_sum
        components = {
            "Eh": acc.mean, "Nh": nh, "Nf2": nf2, "beta": beta,
            "gamma_sum": report.gamma_sum, "W2": w2,
        }
        return ExpansionResidual(2, lhs, acc.std_error, rhs, components)

    kappa3, kappa4 = cumulants_of_sum(model, 4, mode, seed, replicates, config)
    r = conjecture_terms(model, 3, mode, seed, replicates, config)
    r1, r2, r3 = (r[m].value for m in (1, 2, 3))
    w3 = wp_vs_normal(sample, 3)
    k3, k4 = kappa3.value, kappa4.value
    lhs = abs(acc.mean - nh + 0.5 * k3 * nf2 + k4 / 6.0 * nf3 - 0.25 * k3 * k3 * ng2)
    rhs = (r1 * r1 + r2) * w3 + r1 * r2 + r3
    components = {
        "Eh": acc.mean, "Nh": nh, "Nf2": nf2, "Nf3": nf3, "Ng2": ng2,
        "kappa3": k3, "kappa4": k4, "R1": r1, "R2": r2, "R3": r3, "W3": w3,
    }
    return ExpansionResidual(3, lhs, acc.std_error, rhs, components)
