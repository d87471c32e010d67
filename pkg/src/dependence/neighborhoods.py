"""
Systemes de voisinages emboites A_i, A_ij, A_ijk, ... sur un ensemble fini
d'indices, et enumeration des chaines emboitees.
"""

from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from ..config import LimitsConfig, get_config
from ..errors import ConfigError, InsufficientDepthError


class NeighborhoodSystem:
    """Interface commune: neighborhood(chain) -> tuple trie d'indices."""

    size: int
    depth: int

    def lookup(self, chain: tuple) -> Optional[tuple]:
        """Voisinage de la chaine, ou None s'il n'est pas defini."""
        raise NotImplementedError

    def neighborhood(self, chain: tuple) -> tuple:
        if not 1 <= len(chain) <= self.depth:
            raise InsufficientDepthError(
                f"voisinage de niveau {len(chain)} demande, profondeur {self.depth}"
            )
        result = self.lookup(tuple(chain))
        if result is None:
            raise ConfigError(f"voisinage non defini pour la chaine {tuple(chain)}")
        return result

    def require_depth(self, depth: int, what: str = "") -> None:
        if self.depth < depth:
            label = f" pour {what}" if what else ""
            raise InsufficientDepthError(
                f"profondeur {depth} requise{label}, le systeme s'arrete a {self.depth}"
            )


class FootprintNeighborhoods(NeighborhoodSystem):
    """Voisinages par empreintes.

    Chaque indice possede une empreinte (ensemble de variables de base
    independantes dont il depend). A_{i1..im} est l'ensemble des l dont
    l'empreinte rencontre la reunion des empreintes de i1..im. Les
    voisinages de niveau 1 sont materialises si N <= eager_limit.
    """

    def __init__(
        self,
        footprints: Sequence[Iterable[int]],
        depth: int = 3,
        config: Optional[LimitsConfig] = None,
    ):
        if depth < 1:
            raise ConfigError(f"profondeur invalide: {depth}")
        self.config = config or get_config().limits
        self.footprints = tuple(frozenset(fp) for fp in footprints)
        self.size = len(self.footprints)
        self.depth = depth

        # Index inverse: variable de base -> indices qui en dependent
        owners: dict[int, list[int]] = {}
        for i, fp in enumerate(self.footprints):
            for b in fp:
                owners.setdefault(b, []).append(i)
        self._owners = {b: tuple(ix) for b, ix in owners.items()}

        self._level1: Optional[list[tuple]] = None
        if self.size <= self.config.eager_limit:
            self._level1 = [self._union_rule((i,)) for i in range(self.size)]

        self._cached = lru_cache(maxsize=262_144)(self._union_rule)

    def _union_rule(self, key: tuple) -> tuple:
        touched: set[int] = set()
        for i in key:
            for b in self.footprints[i]:
                touched.update(self._owners[b])
        return tuple(sorted(touched))

    def lookup(self, chain: tuple) -> Optional[tuple]:
        if not chain or len(chain) > self.depth:
            return None
        if any(i < 0 or i >= self.size for i in chain):
            return None
        if len(chain) == 1 and self._level1 is not None:
            return self._level1[chain[0]]
        # Le voisinage ne depend que de l'ensemble des indices de la chaine
        return self._cached(tuple(sorted(set(chain))))


class ExplicitNeighborhoods(NeighborhoodSystem):
    """Voisinages donnes explicitement par une table chaine -> indices."""

    def __init__(self, size: int, depth: int, maps: Mapping[tuple, Iterable[int]]):
        if size < 1:
            raise ConfigError("ensemble d'indices vide")
        self.size = size
        self.depth = depth
        self._maps = {tuple(k): tuple(sorted(set(v))) for k, v in maps.items()}

    def lookup(self, chain: tuple) -> Optional[tuple]:
        return self._maps.get(tuple(chain))

    def with_override(self, chain: tuple, members: Iterable[int]) -> "ExplicitNeighborhoods":
        maps = dict(self._maps)
        maps[tuple(chain)] = tuple(members)
        return ExplicitNeighborhoods(self.size, self.depth, maps)

    @classmethod
    def materialize(cls, system: NeighborhoodSystem, depth: Optional[int] = None) -> "ExplicitNeighborhoods":
        """Copie explicite d'un systeme (toutes les chaines jusqu'a depth)."""
        depth = system.depth if depth is None else depth
        maps: dict[tuple, tuple] = {}
        frontier = [(i,) for i in range(system.size)]
        for level in range(1, depth + 1):
            next_frontier = []
            for chain in frontier:
                members = system.neighborhood(chain)
                maps[chain] = members
                if level < depth:
                    next_frontier.extend(chain + (k,) for k in members)
            frontier = next_frontier
        return cls(system.size, depth, maps)


def singleton_neighborhoods(size: int, depth: int = 3) -> FootprintNeighborhoods:
    """A_i = {i}, A_ij = {i, j}, ...: cas independant."""
    return FootprintNeighborhoods([(i,) for i in range(size)], depth=depth)


def iter_chains(
    system: NeighborhoodSystem,
    length: int,
    leading: Optional[int] = None,
) -> Iterator[tuple]:
    """Chaines emboitees (i1, i2 in A_i1, ..., i_L in A_{i1..i_{L-1}}).

    Si leading est donne, seules les chaines commencant par cet indice sont
    produites (partition par indice de tete).
    """
    if length < 1:
        raise ConfigError(f"longueur de chaine invalide: {length}")
    system.require_depth(length - 1, f"des chaines de longueur {length}")

    starts = range(system.size) if leading is None else (leading,)

    def extend(chain: tuple) -> Iterator[tuple]:
        if len(chain) == length:
            yield chain
            return
        for k in system.neighborhood(chain):
            yield from extend(chain + (k,))

    for i in starts:
        yield from extend((i,))


def chain_array(
    system: NeighborhoodSystem,
    length: int,
    leading: Optional[int] = None,
) -> np.ndarray:
    """Chaines emboitees sous forme de tableau (C, length) d'entiers."""
    chains = list(iter_chains(system, length, leading))
    if not chains:
        return np.empty((0, length), dtype=np.int64)
    return np.asarray(chains, dtype=np.int64)


def beta_chain_arrays(
    system: NeighborhoodSystem,
    leading: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Triplets du terme beta et leurs poids.

    (i, j in A_i, k in A_i) de poids 1 et (i, j in A_i, k in A_ij \\ A_i)
    de poids 2.
    """
    system.require_depth(2, "beta")
    starts = range(system.size) if leading is None else (leading,)
    chains: list[tuple] = []
    weights: list[float] = []
    for i in starts:
        a_i = system.neighborhood((i,))
        a_i_set = set(a_i)
        for j in a_i:
            for k in a_i:
                chains.append((i, j, k))
                weights.append(1.0)
            for k in system.neighborhood((i, j)):
                if k not in a_i_set:
                    chains.append((i, j, k))
                    weights.append(2.0)
    if not chains:
        return np.empty((0, 3), dtype=np.int64), np.empty(0)
    return np.asarray(chains, dtype=np.int64), np.asarray(weights)
