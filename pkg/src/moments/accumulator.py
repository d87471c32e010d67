"""
Accumulation en flux des moyennes/variances Monte Carlo et execution des
lots de replicats sur un pool de threads.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional
import math

import numpy as np

from ..config import MonteCarloConfig, get_config
from ..errors import NumericalError
from ..models import MomentEstimate


@dataclass
class MomentAccumulator:
    """Moyenne et M2 en flux (fusion de Chan)."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def add(self, values: np.ndarray) -> None:
        values = np.asarray(values, dtype=float).ravel()
        if values.size == 0:
            return
        # Sommes compensees: les termes se compensent presque
        batch_mean = math.fsum(values) / values.size
        batch_m2 = math.fsum((values - batch_mean) ** 2)
        self.merge(MomentAccumulator(values.size, batch_mean, batch_m2))

    def merge(self, other: "MomentAccumulator") -> None:
        if other.count == 0:
            return
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean, other.m2
            return
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean += delta * other.count / total
        self.m2 += other.m2 + delta * delta * self.count * other.count / total
        self.count = total

    @property
    def variance(self) -> float:
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)

    @property
    def std_error(self) -> float:
        if self.count < 1:
            return 0.0
        return math.sqrt(self.variance / self.count)

    def estimate(self) -> MomentEstimate:
        if self.count < 1:
            raise NumericalError("aucun replicat accumule")
        return MomentEstimate.from_mc(self.mean, self.std_error, self.count)


def batch_sizes(replicates: int, batch_size: int) -> list[int]:
    """Decoupe replicates en lots (le dernier peut etre plus petit)."""
    if replicates < 1:
        raise ValueError(f"replicates doit etre >= 1 (recu {replicates})")
    full, rest = divmod(replicates, batch_size)
    sizes = [batch_size] * full
    if rest:
        sizes.append(rest)
    return sizes


def run_replicates(
    replicates: int,
    batch_fn: Callable[[int, int], np.ndarray],
    n_outputs: int,
    config: Optional[MonteCarloConfig] = None,
    batch_size: Optional[int] = None,
) -> list[MomentAccumulator]:
    """
    Evalue batch_fn(indice_lot, taille) sur tous les lots et fusionne.

    Args:
        replicates: Nombre total de replicats
        batch_fn: Renvoie un tableau (taille, n_outputs) de statistiques
        n_outputs: Nombre de statistiques par replicat
        batch_size: Taille des lots (config par defaut)

    Returns:
        Un accumulateur par statistique, fusionnes dans l'ordre des lots
    """
    config = config or get_config().montecarlo
    sizes = batch_sizes(replicates, batch_size or config.batch_size)

    def evaluate(item: tuple[int, int]) -> list[MomentAccumulator]:
        index, size = item
        stats = np.asarray(batch_fn(index, size), dtype=float).reshape(size, n_outputs)
        accs = []
        for col in range(n_outputs):
            acc = MomentAccumulator()
            acc.add(stats[:, col])
            accs.append(acc)
        return accs

    items = list(enumerate(sizes))
    if config.workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            partials = list(executor.map(evaluate, items))
    else:
        partials = [evaluate(item) for item in items]

    # Fusion dans l'ordre des lots: resultat independant de l'ordonnancement
    totals = [MomentAccumulator() for _ in range(n_outputs)]
    for accs in partials:
        for total, acc in zip(totals, accs):
            total.merge(acc)
    return totals
