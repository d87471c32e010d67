"""
Cibles des etudes de vitesse: pour un modele et un n, un tirage de W et la
valeur de la fonctionnelle de borne (sans constante).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional
import math

import numpy as np

from ..applications import (
    GraphSpec,
    SymmetricQuadraticKernel,
    UStatSpec,
    graph_bound_functional,
    graph_variance,
    iid_model,
    mdep_model,
    psi,
    sample_counts,
    ustat_model,
)
from ..bounds import iid_wp_bound, mdep_bound_functional, per_index_moments, theorem3_rate
from ..config import AppConfig, get_config
from ..errors import ConfigError
from ..matching import five_point_law, four_point_law, lemma3_bound
from ..models import EstimationMode, LocalModel


MODELS = ("iid", "mdep", "ustat", "erg", "law")


@dataclass
class RateTarget:
    """W a tirer et fonctionnelle de borne pour un point de grille."""

    model: str
    n: int
    param: str
    draw: Callable[[np.random.Generator, int], np.ndarray]
    bound: float
    extras: dict = field(default_factory=dict)


def _moment_mode(model: LocalModel) -> EstimationMode:
    return EstimationMode.EXACT if model.has_exact_support else EstimationMode.MC


def _iid_target(n: int, params: dict, seed: int, config: AppConfig) -> RateTarget:
    law = params.get("law", "rademacher")
    model = iid_model(n, law)
    _, fourth = per_index_moments(model, _moment_mode(model), seed, config=config)
    return RateTarget(
        "iid", n, f"law={law}", model.draw_sums,
        iid_wp_bound([e.value for e in fourth], 2),
    )


def _mdep_target(n: int, params: dict, seed: int, config: AppConfig) -> RateTarget:
    m = int(params.get("m", 2))
    law = params.get("law", "rademacher")
    model = mdep_model(n, m, law, params.get("coefficients"), seed=seed)
    third, fourth = per_index_moments(model, _moment_mode(model), seed, config=config)
    bound = mdep_bound_functional([e.value for e in third], [e.value for e in fourth], m)
    return RateTarget("mdep", n, f"m={m},law={law}", model.draw_sums, bound)


def _ustat_target(n: int, params: dict, seed: int, config: AppConfig) -> RateTarget:
    kernel = SymmetricQuadraticKernel(
        params.get("a", Fraction(1, 2)),
        params.get("b", Fraction(1, 10)),
        params.get("c", 0),
    )
    law = params.get("law", "rademacher")
    model = ustat_model(UStatSpec(n, kernel, base_law=law, seed=seed), config=config)
    return RateTarget(
        "ustat", n, f"{kernel.name},law={law}", model.draw_sums, theorem3_rate(n),
        {"sigma_ratio": model.params["sigma_ratio"]},
    )


def _erg_target(n: int, params: dict, seed: int, config: AppConfig) -> RateTarget:
    spec = GraphSpec.named(params.get("motif", "triangle"), n, params.get("p", "0.3"))
    mean = spec.expected_copies() * float(spec.p) ** spec.e
    sigma = math.sqrt(graph_variance(spec, seed, config))

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        return (sample_counts(spec, rng, size) - mean) / sigma

    return RateTarget(
        "erg", n, f"{spec.name},p={spec.p}", draw,
        graph_bound_functional(n, spec.p, spec.core),
        {"psi": psi(n, spec.p, spec.core)},
    )


def _law_target(n: int, params: dict, seed: int, config: AppConfig) -> RateTarget:
    beta = params.get("beta", "0.1")
    if params.get("kappa4") is not None:
        law = five_point_law(beta, params["kappa4"], config.matching)
        param = f"kappa3={beta},kappa4={params['kappa4']}"
    else:
        law = four_point_law(beta, config.matching)
        param = f"beta={beta}"
    atoms, probs = law.float_atoms(), law.float_probs()
    size_n = law.n_selected

    def draw(rng: np.random.Generator, size: int) -> np.ndarray:
        if law.is_degenerate:
            return rng.standard_normal(size)
        counts = rng.multinomial(size_n, probs, size=size)
        return counts @ atoms / math.sqrt(size_n)

    return RateTarget("law", size_n or 0, param, draw, lemma3_bound(law))


_BUILDERS = {
    "iid": _iid_target,
    "mdep": _mdep_target,
    "ustat": _ustat_target,
    "erg": _erg_target,
    "law": _law_target,
}


def build_target(
    model: str,
    n: int,
    params: Optional[dict] = None,
    seed: int = 0,
    config: Optional[AppConfig] = None,
) -> RateTarget:
    """Construit la cible (modele, n). Pour 'law', n est fixe par la loi."""
    builder = _BUILDERS.get(model)
    if builder is None:
        raise ConfigError(f"modele inconnu: {model!r} ({'|'.join(MODELS)})")
    return builder(n, dict(params or {}), seed, config or get_config())
