"""
Modeles independants (et paires dupliquees) utilises comme references.
"""

from fractions import Fraction
import math

import numpy as np

from ..dependence.checks import standardize
from ..dependence.neighborhoods import FootprintNeighborhoods
from ..errors import ConfigError
from ..models import ExactSupport, IndexSet, LocalModel
from .base import BaseLaw, bernoulli, parse_base_law, rademacher


def iid_model(n: int, base_law="rademacher", depth: int = 3) -> LocalModel:
    """
    X_i = (eps_i - E eps) / sqrt(n Var eps), eps_i i.i.d. de loi base_law.

    Support exact si la loi est finie; sinon (normale) standardisation en
    forme close.
    """
    if n < 1:
        raise ConfigError(f"n doit etre >= 1 (recu {n})")
    law = parse_base_law(base_law)
    if not law.is_finite:
        return normal_surrogate_model(n, depth)

    mean = law.mean
    support = ExactSupport(
        base_laws=(law.law(),) * n,
        parents=tuple((i,) for i in range(n)),
        statistic=lambda i, values: values[0] - mean,
        raw_variance=n * law.variance,
    )
    fmean = float(mean)

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        return law.sample(rng, (size, n)) - fmean

    model = LocalModel(
        name=f"iid-{law.name}",
        index_set=IndexSet.range(n),
        neighborhoods=FootprintNeighborhoods([(i,) for i in range(n)], depth=depth),
        sampler=sampler,
        exact_support=support,
        params={"n": n, "law": law.name},
    )
    return standardize(model, "exact")


def rademacher_model(n: int, depth: int = 3) -> LocalModel:
    return iid_model(n, rademacher(), depth)


def bernoulli_model(n: int, q, depth: int = 3) -> LocalModel:
    return iid_model(n, bernoulli(q), depth)


def finite_law_model(n: int, law: BaseLaw, depth: int = 3) -> LocalModel:
    if not law.is_finite:
        raise ConfigError(f"{law.name}: loi finie attendue")
    return iid_model(n, law, depth)


def normal_surrogate_model(n: int, depth: int = 3) -> LocalModel:
    """X_i i.i.d. N(0, 1/n): W suit exactement N(0,1). Pas de support exact."""
    if n < 1:
        raise ConfigError(f"n doit etre >= 1 (recu {n})")

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.standard_normal((size, n))

    def sum_sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        return math.sqrt(n) * rng.standard_normal(size)

    model = LocalModel(
        name="iid-normal",
        index_set=IndexSet.range(n),
        neighborhoods=FootprintNeighborhoods([(i,) for i in range(n)], depth=depth),
        sampler=sampler,
        sum_sampler=sum_sampler,
        params={"n": n, "law": "normal"},
    )
    return model.with_scale(1.0 / math.sqrt(n), Fraction(1, n))


def duplicated_pairs_model(pairs: int, depth: int = 3) -> LocalModel:
    """
    X_{2k} = X_{2k+1} = eps_k (Rademacher): dependance locale par blocs.

    A_i est le bloc {2k, 2k+1}; W = 2 sum eps_k / sqrt(4 pairs).
    """
    if pairs < 1:
        raise ConfigError(f"au moins une paire requise (recu {pairs})")
    n = 2 * pairs
    law = rademacher()
    support = ExactSupport(
        base_laws=(law.law(),) * pairs,
        parents=tuple((i // 2,) for i in range(n)),
        statistic=lambda i, values: values[0],
        raw_variance=Fraction(4 * pairs),
    )

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        eps = law.sample(rng, (size, pairs))
        return np.repeat(eps, 2, axis=1)

    model = LocalModel(
        name="duplicated-pairs",
        index_set=IndexSet.range(n),
        neighborhoods=FootprintNeighborhoods([(i // 2,) for i in range(n)], depth=depth),
        sampler=sampler,
        exact_support=support,
        params={"n": n, "pairs": pairs},
    )
    return standardize(model, "exact")
