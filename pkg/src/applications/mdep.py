"""
Suites m-dependantes: moyennes mobiles X_i = sum_{r=0}^m c_r eps_{i-r}.

Les bruits eps_{-m}, ..., eps_{n-1} sont i.i.d.; le bruit eps_{i-r} est la
variable de base d'indice i - r + m. L'empreinte de X_i est {i, ..., i+m},
ce qui donne A_i = {j : |j - i| <= m} par la regle d'union.
"""

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ..dependence.checks import standardize
from ..dependence.neighborhoods import FootprintNeighborhoods
from ..errors import ConfigError
from ..matching.laws import to_fraction
from ..models import EstimationMode, ExactSupport, IndexSet, LocalModel
from .base import parse_base_law


def _noise_weights(n: int, m: int, coefficients: Sequence[Fraction]) -> list[Fraction]:
    """Poids de chaque bruit dans S = sum_i X_i."""
    weights = [Fraction(0)] * (n + m)
    for i in range(n):
        for r, c in enumerate(coefficients):
            weights[i - r + m] += c
    return weights


def mdep_model(
    n: int,
    m: int,
    base_law="rademacher",
    coefficients: Optional[Sequence] = None,
    depth: int = 3,
    seed: int = 0,
) -> LocalModel:
    """
    Moyenne mobile d'ordre m, standardisee.

    Args:
        n: nombre de termes
        m: ordre de dependance (m < n)
        base_law: loi du bruit (rademacher, normal, bernoulli:<q>)
        coefficients: c_0..c_m (tous egaux a 1 par defaut)
        depth: profondeur du systeme de voisinages
        seed: graine (utilisee seulement si la standardisation est mc)

    Raises:
        ConfigError: m >= n, m < 0 ou coefficients de mauvaise longueur
    """
    if m < 0:
        raise ConfigError(f"m doit etre >= 0 (recu {m})")
    if m >= n:
        raise ConfigError(f"m = {m} >= n = {n}: pas de suite m-dependante")
    coefficients = [Fraction(1)] * (m + 1) if coefficients is None else [to_fraction(c) for c in coefficients]
    if len(coefficients) != m + 1:
        raise ConfigError(f"{len(coefficients)} coefficients pour m = {m} (m+1 attendus)")

    law = parse_base_law(base_law)
    mean = law.mean
    weights = _noise_weights(n, m, coefficients)
    raw_variance = law.variance * sum((w * w for w in weights), Fraction(0))

    parents = tuple(tuple(i - r + m for r in range(m + 1)) for i in range(n))

    support = None
    if law.is_finite:
        def statistic(i: int, values: tuple) -> Fraction:
            return sum((c * (v - mean) for c, v in zip(coefficients, values)), Fraction(0))

        support = ExactSupport(
            base_laws=(law.law(),) * (n + m),
            parents=parents,
            statistic=statistic,
            raw_variance=raw_variance,
        )

    fcoef = np.array([float(c) for c in coefficients])
    fweights = np.array([float(w) for w in weights])
    fmean = float(mean)

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        eps = law.sample(rng, (size, n + m)) - fmean
        out = np.zeros((size, n))
        for r, c in enumerate(fcoef):
            out += c * eps[:, m - r:m - r + n]
        return out

    def sum_sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        eps = law.sample(rng, (size, n + m)) - fmean
        return eps @ fweights

    model = LocalModel(
        name=f"mdep-m{m}-{law.name}",
        index_set=IndexSet.range(n),
        neighborhoods=FootprintNeighborhoods(parents, depth=depth),
        sampler=sampler,
        exact_support=support,
        sum_sampler=sum_sampler,
        params={"n": n, "m": m, "law": law.name, "coefficients": tuple(str(c) for c in coefficients)},
    )
    if raw_variance == 0:
        # standardize leve DegenerateSumError
        return standardize(model, EstimationMode.EXACT if support else EstimationMode.MC, seed=seed)
    if support is not None:
        return standardize(model, EstimationMode.EXACT)
    # Bruit continu: la variance reste en forme close
    scale_sq = 1 / raw_variance
    return model.with_scale(float(scale_sq) ** 0.5, scale_sq)
