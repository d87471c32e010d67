"""
Moments mixtes des X_i et cumulants de W: enumeration exacte sur le support
factorise, ou Monte Carlo avec erreur standard.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

import numpy as np

from ..config import AppConfig, get_config
from ..errors import (
    ConfigError,
    ExactModeUnavailableError,
    UnstandardizedModelError,
)
from ..models import EstimationMode, ExactSupport, LocalModel, MomentEstimate
from ..rng import stream
from ..surd import QuadraticSurd
from .accumulator import run_replicates


# --- Enumeration exacte ----------------------------------------------------


def _components(support: ExactSupport, indices: Sequence[int]) -> list[list[int]]:
    """Groupes d'indices relies par une variable de base commune."""
    parent = list(range(len(indices)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    owner: dict[int, int] = {}
    for pos, i in enumerate(indices):
        for b in support.parents[i]:
            if b in owner:
                ra, rb = find(owner[b]), find(pos)
                if ra != rb:
                    parent[rb] = ra
            else:
                owner[b] = pos

    groups: dict[int, list[int]] = {}
    for pos, i in enumerate(indices):
        groups.setdefault(find(pos), []).append(i)
    return list(groups.values())


def _enumerate(support: ExactSupport, indices: Sequence[int], absolute: bool, cap: int):
    base_vars = sorted({b for i in indices for b in support.parents[i]})
    outcomes = support.outcome_count(base_vars)
    if outcomes > cap:
        raise ExactModeUnavailableError(
            f"enumeration de {outcomes} issues (plafond {cap})"
        )
    position = {b: k for k, b in enumerate(base_vars)}
    parent_pos = [tuple(position[b] for b in support.parents[i]) for i in indices]
    laws = [support.base_laws[b] for b in base_vars]

    total = Fraction(0)
    for combo in product(*laws):
        value = Fraction(1)
        for i, pp in zip(indices, parent_pos):
            value *= support.statistic(i, tuple(combo[k][0] for k in pp))
            if value == 0:
                break
        if value == 0:
            continue
        prob = Fraction(1)
        for _, p in combo:
            prob = prob * p
        total = total + prob * (abs(value) if absolute else value)
    return total


def exact_raw_moment(
    support: ExactSupport,
    indices: Sequence[int],
    absolute: bool = False,
    cap: Optional[int] = None,
):
    """E[prod Y_i] (ou E[prod |Y_i|]) sur les valeurs brutes, memoise.

    Le produit se factorise sur les composantes connexes (variables de base
    partagees); une composante a un seul facteur signe est nulle.
    """
    cap = cap if cap is not None else get_config().limits.joint_outcomes_cap
    key = (tuple(sorted(indices)), bool(absolute))
    cached = support._cache.get(key)
    if cached is not None:
        return cached

    groups = _components(support, key[0])
    if not absolute and any(len(g) == 1 for g in groups):
        result = Fraction(0)
    elif len(groups) == 1:
        result = _enumerate(support, key[0], absolute, cap)
    else:
        result = Fraction(1)
        for g in groups:
            result = result * exact_raw_moment(support, g, absolute, cap)
            if result == 0:
                break

    support._cache[key] = result
    return result


def exact_raw_variance(support: ExactSupport):
    """Var(S) brute: forme close si fournie, sinon somme sur les paires liees."""
    if support.raw_variance is not None:
        return support.raw_variance

    owners: dict[int, set[int]] = {}
    for i, pa in enumerate(support.parents):
        for b in pa:
            owners.setdefault(b, set()).add(i)

    total = Fraction(0)
    for i, pa in enumerate(support.parents):
        linked = set()
        for b in pa:
            linked |= owners[b]
        for j in linked:
            total = total + exact_raw_moment(support, (i, j))
    return total


def _require_exact(model: LocalModel) -> ExactSupport:
    if model.exact_support is None:
        raise ExactModeUnavailableError(f"{model.name}: pas de support exact")
    return model.exact_support


def exact_mixed_moment(model: LocalModel, indices: Sequence[int], absolute: bool = False) -> QuadraticSurd:
    """E[prod X_i] exact, echelle incluse."""
    support = _require_exact(model)
    raw = exact_raw_moment(support, indices, absolute)
    return QuadraticSurd.coerce(raw) * model.exact_scale_power(len(indices))


# --- Operations ------------------------------------------------------------


def mixed_moment(
    model: LocalModel,
    indices: Sequence[int],
    absolute: bool = False,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> MomentEstimate:
    """
    E[prod X_i] (signe) ou E[prod |X_i|] (absolu).

    Args:
        model: Modele local
        indices: Liste ordonnee d'indices (repetitions autorisees)
        absolute: Moment absolu
        mode: exact (enumeration) ou mc
        seed: Graine du flux Monte Carlo
        replicates: Replicats Monte Carlo (config par defaut)

    Returns:
        MomentEstimate
    """
    mode = EstimationMode.parse(mode)
    indices = tuple(int(i) for i in indices)
    if not indices:
        raise ConfigError("liste d'indices vide")
    if any(i < 0 or i >= model.size for i in indices):
        raise ConfigError(f"indice hors de l'ensemble: {indices}")

    if mode == EstimationMode.EXACT:
        return MomentEstimate.from_exact(exact_mixed_moment(model, indices, absolute))

    config = config or get_config()
    replicates = replicates or config.montecarlo.replicates
    cols = np.asarray(indices)

    def batch(index: int, size: int) -> np.ndarray:
        x = model.draw(stream(seed, "moment", index, 0), size)
        values = np.prod(x[:, cols], axis=1)
        return np.abs(values) if absolute else values

    (acc,) = run_replicates(replicates, batch, 1, config.montecarlo)
    return acc.estimate()


def cumulants_of_sum(
    model: LocalModel,
    max_order: int = 4,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> tuple[MomentEstimate, Optional[MomentEstimate]]:
    """
    kappa3 = E W^3 et kappa4 = E W^4 - 3 (valables sous E W = 0, E W^2 = 1).

    Returns:
        (kappa3, kappa4); kappa4 vaut None si max_order = 3
    """
    if max_order not in (3, 4):
        raise ConfigError(f"max_order doit valoir 3 ou 4 (recu {max_order})")
    if not model.standardized:
        raise UnstandardizedModelError(f"{model.name}: standardiser avant les cumulants")
    mode = EstimationMode.parse(mode)
    config = config or get_config()

    if mode == EstimationMode.EXACT:
        support = _require_exact(model)
        if model.scale_sq is None:
            raise ExactModeUnavailableError(f"{model.name}: standardisation exacte requise")
        m3, m4 = _exact_sum_moments(support, config.limits.joint_outcomes_cap)
        kappa3 = MomentEstimate.from_exact(QuadraticSurd.coerce(m3) * model.exact_scale_power(3))
        if max_order == 3:
            return kappa3, None
        kappa4 = MomentEstimate.from_exact(
            QuadraticSurd.coerce(m4) * model.exact_scale_power(4) - 3
        )
        return kappa3, kappa4

    replicates = replicates or config.montecarlo.replicates

    def batch(index: int, size: int) -> np.ndarray:
        w = model.draw_sums(stream(seed, "moment", index, 0), size)
        return np.column_stack([w ** 3, w ** 4 - 3.0])

    acc3, acc4 = run_replicates(replicates, batch, 2, config.montecarlo)
    if max_order == 3:
        return acc3.estimate(), None
    return acc3.estimate(), acc4.estimate()


def _component_moments(support: ExactSupport, indices: Sequence[int], cap: int) -> list:
    """[E T, E T^2, E T^3, E T^4] pour T = somme des Y_i du groupe."""
    base_vars = sorted({b for i in indices for b in support.parents[i]})
    outcomes = support.outcome_count(base_vars)
    if outcomes > cap:
        raise ExactModeUnavailableError(f"loi conjointe de {outcomes} issues (plafond {cap})")
    position = {b: k for k, b in enumerate(base_vars)}
    parent_pos = [tuple(position[b] for b in support.parents[i]) for i in indices]
    laws = [support.base_laws[b] for b in base_vars]

    moments = [Fraction(0)] * 4
    for combo in product(*laws):
        s = Fraction(0)
        for i, pp in zip(indices, parent_pos):
            s += support.statistic(i, tuple(combo[k][0] for k in pp))
        if s == 0:
            continue
        prob = Fraction(1)
        for _, p in combo:
            prob = prob * p
        power = prob
        for k in range(4):
            power = power * s
            moments[k] = moments[k] + power
    return moments


def _exact_sum_moments(support: ExactSupport, cap: int):
    """
    E S^3 et E S^4.

    Les groupes d'indices sans variable de base commune sont independants:
    leurs cumulants s'ajoutent, chaque groupe est enumere separement.
    """
    k1 = k2 = k3 = k4 = Fraction(0)
    for group in _components(support, range(support.size)):
        m1, m2, m3, m4 = _component_moments(support, group, cap)
        k1 = k1 + m1
        k2 = k2 + (m2 - m1 * m1)
        k3 = k3 + (m3 - 3 * m2 * m1 + 2 * m1 ** 3)
        k4 = k4 + (m4 - 4 * m3 * m1 - 3 * m2 * m2 + 12 * m2 * m1 * m1 - 6 * m1 ** 4)
    m3 = k3 + 3 * k2 * k1 + k1 ** 3
    m4 = k4 + 4 * k3 * k1 + 3 * k2 * k2 + 6 * k2 * k1 * k1 + k1 ** 4
    return m3, m4


# --- Sommes de chaines ----------------------------------------------------


@dataclass(frozen=True)
class ChainTerm:
    """Somme ponderee sur des chaines d'un produit d'esperances par segment.

    Chaque segment est un tuple de positions dans la chaine; les esperances
    des differents segments sont estimees sur des copies independantes.
    """

    chains: np.ndarray
    weights: np.ndarray
    segments: tuple[tuple[int, ...], ...]
    absolute: bool = True

    @property
    def term_count(self) -> int:
        return int(self.chains.shape[0])


def _exact_term(model: LocalModel, term: ChainTerm) -> QuadraticSurd:
    support = _require_exact(model)
    raw_total = Fraction(0)
    for chain, weight in zip(term.chains.tolist(), term.weights.tolist()):
        value = Fraction(1)
        for seg in term.segments:
            value = value * exact_raw_moment(support, [chain[p] for p in seg], term.absolute)
            if value == 0:
                break
        if value != 0:
            raw_total = raw_total + Fraction(weight) * value

    # Echelle: produit des scale^|segment|
    factor = QuadraticSurd(1)
    for seg in term.segments:
        factor = factor * model.exact_scale_power(len(seg))
    return QuadraticSurd.coerce(raw_total) * factor


def _mc_term_batch(
    copies: list[np.ndarray],
    term: ChainTerm,
    chunk: int,
) -> np.ndarray:
    size = copies[0].shape[0]
    totals = np.zeros(size)
    per_chunk = max(1, chunk // max(size, 1))
    for start in range(0, term.term_count, per_chunk):
        chains = term.chains[start:start + per_chunk]
        values = np.ones((size, chains.shape[0]))
        for s, seg in enumerate(term.segments):
            block = copies[s][:, chains[:, seg[0]]]
            for pos in seg[1:]:
                block = block * copies[s][:, chains[:, pos]]
            values *= np.abs(block) if term.absolute else block
        totals += values @ term.weights[start:start + per_chunk]
    return totals


def _as_group(item) -> tuple[ChainTerm, ...]:
    if isinstance(item, ChainTerm):
        return (item,)
    return tuple(item)


def _leading_partitions(term: ChainTerm) -> list[ChainTerm]:
    """Decoupe un terme par indice de tete i1."""
    if term.term_count == 0:
        return []
    leads = term.chains[:, 0]
    order = np.argsort(leads, kind="stable")
    chains = term.chains[order]
    weights = term.weights[order]
    cuts = np.flatnonzero(np.diff(chains[:, 0])) + 1
    return [
        ChainTerm(c, w, term.segments, term.absolute)
        for c, w in zip(np.split(chains, cuts), np.split(weights, cuts))
    ]


def chain_term_sums(
    model: LocalModel,
    groups: Sequence,
    mode=EstimationMode.MC,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> list[MomentEstimate]:
    """
    Evalue plusieurs sommes de chaines sur un meme flux (nombres aleatoires
    communs).

    Chaque element de groups est un ChainTerm ou une sequence de ChainTerm
    dont les valeurs sont additionnees replicat par replicat. En Monte
    Carlo, le segment s de chaque terme est evalue sur la copie
    independante s.
    """
    mode = EstimationMode.parse(mode)
    groups = [_as_group(g) for g in groups]
    config = config or get_config()

    if mode == EstimationMode.EXACT:
        results = []
        for group in groups:
            parts = [p for t in group for p in _leading_partitions(t)]
            # Addition exacte: l'ordre de reduction est sans effet
            if config.montecarlo.workers > 1 and len(parts) > 1:
                with ThreadPoolExecutor(max_workers=config.montecarlo.workers) as executor:
                    values = list(executor.map(lambda t: _exact_term(model, t), parts))
            else:
                values = [_exact_term(model, t) for t in parts]
            total = QuadraticSurd(0)
            for v in values:
                total = total + v
            results.append(MomentEstimate.from_exact(total))
        return results

    replicates = replicates or config.montecarlo.replicates
    n_copies = max(len(t.segments) for g in groups for t in g)
    chunk = config.montecarlo.chain_chunk

    # Lots plus petits quand N est grand (tableaux (lot, N) par copie)
    batch_size = max(1, min(config.montecarlo.batch_size, chunk // max(model.size, 1)))

    def batch(index: int, size: int) -> np.ndarray:
        copies = [model.draw(stream(seed, "moment", index, c), size) for c in range(n_copies)]
        columns = []
        for group in groups:
            total = np.zeros(size)
            for t in group:
                total += _mc_term_batch(copies, t, chunk)
            columns.append(total)
        return np.column_stack(columns)

    accs = run_replicates(replicates, batch, len(groups), config.montecarlo, batch_size)
    return [acc.estimate() for acc in accs]
