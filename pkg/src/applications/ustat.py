"""
U-statistiques non degenerees: S = somme sur les m-sous-ensembles i de
{0..n-1} de h(X_i1, ..., X_im) - theta.

L'empreinte de l'indice i est le sous-ensemble lui-meme:
A_i = {j : j rencontre i}, A_ij = {k : k rencontre i u j}, etc.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb
from typing import Callable, Optional, Union
import math

import numpy as np
from rich.console import Console

from ..config import AppConfig, get_config
from ..dependence.checks import standardize
from ..dependence.neighborhoods import FootprintNeighborhoods
from ..errors import ConfigError
from ..matching.laws import to_fraction
from ..models import EstimationMode, ExactSupport, IndexSet, LocalModel
from ..rng import stream
from .base import BaseLaw, parse_base_law

console = Console()


class DegenerateKernelError(ConfigError):
    """Noyau degenere: Var(g(X_1)) nulle ou indiscernable de zero."""
    pass


@dataclass(frozen=True)
class SymmetricQuadraticKernel:
    """h(x, y) = a (x + y) + b x y + c, somme en O(n)."""

    a: Fraction
    b: Fraction
    c: Fraction = Fraction(0)

    order = 2

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, to_fraction(getattr(self, name)))

    @property
    def name(self) -> str:
        return f"quad({self.a},{self.b},{self.c})"

    def __call__(self, x, y):
        if isinstance(x, np.ndarray) or isinstance(y, np.ndarray):
            a, b, c = float(self.a), float(self.b), float(self.c)
        else:
            a, b, c = self.a, self.b, self.c
        return a * (x + y) + b * x * y + c

    def mean(self, law: BaseLaw) -> Fraction:
        mu = law.mean
        return 2 * self.a * mu + self.b * mu * mu + self.c

    def u_sum(self, x: np.ndarray) -> np.ndarray:
        """sum_{i<j} h(x_i, x_j) pour chaque ligne de x (size, n)."""
        n = x.shape[1]
        sx = x.sum(axis=1)
        sq = (x * x).sum(axis=1)
        return (
            float(self.a) * (n - 1) * sx
            + float(self.b) * (sx * sx - sq) / 2.0
            + float(self.c) * n * (n - 1) / 2.0
        )


Kernel = Union[SymmetricQuadraticKernel, Callable]


@dataclass(frozen=True)
class UStatSpec:
    """Specification d'une U-statistique.

    Le noyau doit accepter des tableaux numpy (tirages) et, pour une loi
    de base finie, des Fraction (enumeration exacte).
    """

    n: int
    kernel: Kernel
    m: Optional[int] = None
    base_law: object = "rademacher"
    kernel_name: str = ""
    seed: int = 0
    params: dict = field(default_factory=dict, compare=False)

    @property
    def order(self) -> int:
        if self.m is not None:
            return self.m
        order = getattr(self.kernel, "order", None)
        if order is None:
            raise ConfigError("ordre du noyau inconnu: preciser m")
        return order

    @property
    def law(self) -> BaseLaw:
        return parse_base_law(self.base_law)

    @property
    def name(self) -> str:
        return self.kernel_name or getattr(self.kernel, "name", "kernel")


# --- Noyau: controles ------------------------------------------------------


def check_symmetry(spec: UStatSpec, points: int = 20, tol: float = 1e-9) -> None:
    """Verifie h sur des permutations aleatoires de points aleatoires."""
    m = spec.order
    if m == 1:
        return
    rng = stream(spec.seed, "nondegeneracy", 1)
    x = spec.law.sample(rng, (points, m))
    reference = np.asarray(spec.kernel(*[x[:, k] for k in range(m)]), dtype=float)
    perms = list(permutations(range(m)))[1:]
    for _ in range(min(len(perms), 6)):
        perm = perms[int(rng.integers(0, len(perms)))]
        value = np.asarray(spec.kernel(*[x[:, k] for k in perm]), dtype=float)
        if not np.allclose(value, reference, rtol=tol, atol=tol):
            raise ConfigError(f"{spec.name}: noyau non symetrique (permutation {perm})")


def _exact_table(spec: UStatSpec) -> dict:
    """h sur toutes les issues de la loi de base (m coordonnees)."""
    law = spec.law
    table = {}
    try:
        for combo in product(law.law(), repeat=spec.order):
            values = tuple(v for v, _ in combo)
            prob = math.prod((p for _, p in combo), start=Fraction(1))
            table[values] = (to_fraction(spec.kernel(*values)), prob)
    except TypeError as e:
        raise ConfigError(f"{spec.name}: le noyau doit accepter des Fraction en mode exact") from e
    return table


def hoeffding_components(spec: UStatSpec) -> tuple[Fraction, list[Fraction]]:
    """theta = E h et zeta_c = Var(E[h | X_1..X_c]), c = 1..m (loi finie)."""
    m = spec.order
    table = _exact_table(spec)
    theta = sum((h * p for h, p in table.values()), Fraction(0))

    zetas = []
    for c in range(1, m + 1):
        conditional: dict[tuple, list] = {}
        for values, (h, p) in table.items():
            head = values[:c]
            acc = conditional.setdefault(head, [Fraction(0), Fraction(0)])
            acc[0] += h * p
            acc[1] += p
        # acc[1] = P(X_1..X_c = head); E[h | head] = acc[0] / acc[1]
        zeta = Fraction(0)
        for total, mass in conditional.values():
            if mass:
                zeta += mass * (total / mass - theta) ** 2
        zetas.append(zeta)
    return theta, zetas


def hoeffding_variance(n: int, m: int, zetas: list[Fraction]) -> Fraction:
    """Var(sum_i h(X_i)) = sum_c C(n,m) C(m,c) C(n-m,m-c) zeta_c."""
    return sum(
        (comb(n, m) * comb(m, c) * comb(n - m, m - c) * z for c, z in enumerate(zetas, start=1)),
        Fraction(0),
    )


def empirical_nondegeneracy(spec: UStatSpec, config: Optional[AppConfig] = None) -> tuple[float, float]:
    """
    Estimation sans biais de Var(g(X_1)) et son erreur standard.

    g(x) est estime deux fois, par deux lots interieurs independants; la
    covariance des deux estimations ne contient pas le bruit interieur.
    """
    config = config or get_config()
    draws = config.montecarlo.nondegeneracy_draws
    inner = config.montecarlo.nondegeneracy_inner
    m = spec.order
    law = spec.law
    rng = stream(spec.seed, "nondegeneracy", 0)
    x1 = law.sample(rng, draws)

    def g_hat() -> np.ndarray:
        others = law.sample(rng, (draws, inner, m - 1))
        head = np.broadcast_to(x1[:, None], (draws, inner))
        values = spec.kernel(head, *[others[..., k] for k in range(m - 1)])
        return np.asarray(values, dtype=float).mean(axis=1)

    ga, gb = g_hat(), g_hat()
    z = (ga - ga.mean()) * (gb - gb.mean())
    return float(z.mean()), float(z.std(ddof=1) / math.sqrt(draws))


def _mc_theta(spec: UStatSpec, samples: int = 100_000) -> float:
    rng = stream(spec.seed, "sigma", 0)
    x = spec.law.sample(rng, (samples, spec.order))
    return float(np.mean(spec.kernel(*[x[:, k] for k in range(spec.order)])))


# --- Modele ----------------------------------------------------------------


def neighborhood_ratio(n: int, m: int) -> float:
    """|A_i| / n^(m-1), |A_i| = C(n,m) - C(n-m,m)."""
    return (comb(n, m) - comb(n - m, m)) / n ** (m - 1)


def ustat_model(spec: UStatSpec, depth: int = 3, config: Optional[AppConfig] = None) -> LocalModel:
    """
    U-statistique standardisee.

    Loi de base finie: theta et sigma_n exacts (decomposition de Hoeffding),
    non-degenerescence exacte (zeta_1 > 0). Sinon: controle empirique et
    sigma_n par Monte Carlo.

    Raises:
        ConfigError: n < 2m, noyau non symetrique
        DegenerateKernelError: Var(g(X_1)) nulle
    """
    config = config or get_config()
    n, m = spec.n, spec.order
    if m < 1:
        raise ConfigError(f"ordre du noyau invalide: {m}")
    if n < 2 * m:
        raise ConfigError(f"n = {n} < 2m = {2 * m}")
    law = spec.law
    check_symmetry(spec)

    zetas: list[Fraction] = []
    raw_variance: Optional[Fraction] = None
    if law.is_finite:
        theta, zetas = hoeffding_components(spec)
        if zetas[0] == 0:
            raise DegenerateKernelError(f"{spec.name}: Var(g(X_1)) = 0 (noyau degenere)")
        raw_variance = hoeffding_variance(n, m, zetas)
    else:
        estimate, se = empirical_nondegeneracy(spec, config)
        if estimate < 5.0 * se:
            raise DegenerateKernelError(
                f"{spec.name}: Var(g(X_1)) estimee {estimate:.3g} < 5 SE ({se:.2g})"
            )
        if isinstance(spec.kernel, SymmetricQuadraticKernel):
            theta = spec.kernel.mean(law)
        else:
            theta = _mc_theta(spec)

    subsets = list(combinations(range(n), m))
    index = np.asarray(subsets, dtype=np.int64)
    ftheta = float(theta)
    kernel = spec.kernel

    support = None
    if law.is_finite:
        support = ExactSupport(
            base_laws=(law.law(),) * n,
            parents=tuple(subsets),
            statistic=lambda i, values: to_fraction(kernel(*values)) - theta,
            raw_variance=raw_variance,
        )

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        x = law.sample(rng, (size, n))
        return np.asarray(kernel(*[x[:, index[:, k]] for k in range(m)]), dtype=float) - ftheta

    def sum_sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        x = law.sample(rng, (size, n))
        if isinstance(kernel, SymmetricQuadraticKernel):
            return kernel.u_sum(x) - len(subsets) * ftheta
        total = np.zeros(size)
        chunk = max(1, config.montecarlo.chain_chunk // max(size, 1))
        for start in range(0, len(index), chunk):
            block = index[start:start + chunk]
            total += np.asarray(kernel(*[x[:, block[:, k]] for k in range(m)]), dtype=float).sum(axis=1)
        return total - len(subsets) * ftheta

    params = {"n": n, "m": m, "kernel": spec.name, "law": law.name, **spec.params}
    if zetas:
        params["zeta1"] = float(zetas[0])

    model = LocalModel(
        name=f"ustat-m{m}-{spec.name}",
        index_set=IndexSet(tuple(subsets)),
        neighborhoods=FootprintNeighborhoods(subsets, depth=depth, config=config.limits),
        sampler=sampler,
        exact_support=support,
        sum_sampler=sum_sampler,
        params=params,
    )

    if support is not None:
        model = standardize(model, EstimationMode.EXACT)
        sigma_sq = float(raw_variance)
    else:
        model = standardize(
            model, EstimationMode.MC, seed=spec.seed,
            replicates=config.montecarlo.sigma_replicates, config=config,
        )
        sigma_sq = 1.0 / model.scale ** 2

    ratio = sigma_sq / n ** (2 * m - 1)
    model.params["sigma_ratio"] = ratio
    console.print(f"[dim]{model.name} n={n}: sigma_n^2 / n^(2m-1) = {ratio:.4g}[/dim]")
    return model
