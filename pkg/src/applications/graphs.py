"""
Comptage de sous-graphes dans K(n, p).

Une copie de G dans K_n est identifiee par son ensemble d'aretes (copie
etiquetee, non necessairement induite). Les variables de base sont les
C(n,2) indicatrices d'aretes; l'empreinte d'une copie est son ensemble
d'aretes, d'ou A_i = {j : G_j et G_i partagent une arete}.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from math import comb, factorial, log, exp
from pathlib import Path
from typing import Optional, Union
import math

import networkx as nx
import numpy as np
from networkx.algorithms import isomorphism

from ..config import AppConfig, get_config
from ..dependence.checks import standardize
from ..dependence.neighborhoods import FootprintNeighborhoods
from ..errors import ConfigError
from ..matching.laws import to_fraction
from ..models import EstimationMode, ExactSupport, IndexSet, LocalModel, MomentEstimate
from ..moments.accumulator import run_replicates
from ..rng import stream


class CopyCapExceededError(ConfigError):
    """Trop de copies de G a materialiser."""
    pass


MOTIFS = {
    "edge": lambda: nx.path_graph(2),
    "triangle": lambda: nx.complete_graph(3),
    "path3": lambda: nx.path_graph(3),
    "square": lambda: nx.cycle_graph(4),
}


def load_motif(path: Path) -> nx.Graph:
    """
    Lit un motif: une arete "u v" par ligne, sommets numerotes a partir de 0.

    Les lignes vides et celles commencant par # sont ignorees. Les sommets
    sans arete de 0 a max(u, v) sont conserves (isoles).
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"motif introuvable: {path}")
    edges = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                u, v = (int(x) for x in parts)
            except ValueError as e:
                raise ConfigError(f"{path}:{lineno}: 'u v' attendu, lu {line!r}") from e
            if u < 0 or v < 0 or u == v:
                raise ConfigError(f"{path}:{lineno}: arete invalide ({u}, {v})")
            edges.append((u, v))
    if not edges:
        raise ConfigError(f"{path}: motif sans arete")
    graph = nx.Graph()
    graph.add_nodes_from(range(max(max(e) for e in edges) + 1))
    graph.add_edges_from(edges)
    return graph


def get_motif(name_or_path: Union[str, Path, nx.Graph]) -> nx.Graph:
    """Motif nomme (edge, triangle, path3, square) ou fichier d'aretes."""
    if isinstance(name_or_path, nx.Graph):
        return nx.convert_node_labels_to_integers(name_or_path)
    factory = MOTIFS.get(str(name_or_path))
    if factory is not None:
        return factory()
    return load_motif(Path(name_or_path))


def _core(motif: nx.Graph) -> nx.Graph:
    """Motif sans ses sommets isoles (les copies sont des ensembles d'aretes)."""
    core = motif.copy()
    core.remove_nodes_from([v for v in motif.nodes if motif.degree(v) == 0])
    return nx.convert_node_labels_to_integers(core)


def automorphism_count(motif: nx.Graph) -> int:
    return sum(1 for _ in isomorphism.GraphMatcher(motif, motif).isomorphisms_iter())


def _is_triangle(motif: nx.Graph) -> bool:
    return motif.number_of_nodes() == 3 and motif.number_of_edges() == 3


def _is_edge(motif: nx.Graph) -> bool:
    return motif.number_of_nodes() == 2 and motif.number_of_edges() == 1


@dataclass(frozen=True)
class GraphSpec:
    """Motif G, nombre de sommets n, probabilite d'arete p."""

    motif: nx.Graph
    n: int
    p: Fraction
    name: str = ""
    core: nx.Graph = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "p", to_fraction(self.p))
        if self.motif.number_of_edges() < 1:
            raise ConfigError("le motif doit avoir au moins une arete")
        if not 0 < self.p < 1:
            raise ConfigError(f"p doit etre dans (0,1) (recu {self.p})")
        if self.motif.number_of_nodes() > self.n:
            raise ConfigError(f"v(G) = {self.motif.number_of_nodes()} > n = {self.n}")
        object.__setattr__(self, "core", _core(self.motif))
        if not self.name:
            object.__setattr__(self, "name", f"G{self.motif.number_of_nodes()}v{self.motif.number_of_edges()}e")

    @classmethod
    def named(cls, motif: Union[str, Path, nx.Graph], n: int, p) -> "GraphSpec":
        name = motif if isinstance(motif, str) and motif in MOTIFS else ""
        return cls(get_motif(motif), n, p, name=name)

    @property
    def v(self) -> int:
        return self.core.number_of_nodes()

    @property
    def e(self) -> int:
        return self.core.number_of_edges()

    def expected_copies(self) -> int:
        """Nombre de copies dans K_n: C(n, v) v! / |Aut(G)|."""
        return comb(self.n, self.v) * factorial(self.v) // automorphism_count(self.core)


# --- Copies dans K_n -------------------------------------------------------


def edge_index(n: int) -> dict[tuple[int, int], int]:
    return {e: k for k, e in enumerate(combinations(range(n), 2))}


def enumerate_copies(spec: GraphSpec, cap: int) -> list[tuple[int, ...]]:
    """
    Copies de G dans K_n, chacune comme tuple trie d'identifiants d'aretes.

    Les copies sont produites par sous-ensemble de sommets (donc par plus
    petit sommet), en ordre deterministe.

    Raises:
        CopyCapExceededError: plus de cap copies
    """
    expected = spec.expected_copies()
    if expected > cap:
        raise CopyCapExceededError(
            f"{expected} copies de {spec.name} dans K_{spec.n} (plafond {cap}); "
            "utiliser le chemin rapide des triangles (count_copies / triangle_counts_dense)"
        )
    ids = edge_index(spec.n)
    motif_edges = list(spec.core.edges())
    copies = []
    for vertices in combinations(range(spec.n), spec.v):
        seen = set()
        for image in permutations(vertices):
            key = tuple(sorted(ids[tuple(sorted((image[a], image[b])))] for a, b in motif_edges))
            if key not in seen:
                seen.add(key)
                copies.append(key)
    return copies


def _pair_variance(copies: list[tuple[int, ...]], p: Fraction) -> Fraction:
    """sum sur les paires ordonnees partageant s >= 1 aretes de p^(2e-s) - p^(2e)."""
    e = len(copies[0])
    owners: dict[int, list[int]] = {}
    for i, copy in enumerate(copies):
        for edge in copy:
            owners.setdefault(edge, []).append(i)

    by_overlap = [0] * (e + 1)
    for i, copy in enumerate(copies):
        overlap: dict[int, int] = {}
        for edge in copy:
            for j in owners[edge]:
                overlap[j] = overlap.get(j, 0) + 1
        for s in overlap.values():
            by_overlap[s] += 1
    p2e = p ** (2 * e)
    return sum((count * (p ** (2 * e - s) - p2e) for s, count in enumerate(by_overlap) if s), Fraction(0))


def erg_model(spec: GraphSpec, depth: int = 3, config: Optional[AppConfig] = None) -> LocalModel:
    """
    Nombre de copies de G dans K(n,p), standardise.

    Raises:
        CopyCapExceededError: plus de limits.copies_cap copies
    """
    config = config or get_config()
    copies = enumerate_copies(spec, config.limits.copies_cap)
    n_edges = comb(spec.n, 2)
    p = spec.p
    pe = p ** spec.e
    fp, fpe = float(p), float(pe)
    copy_idx = np.asarray(copies, dtype=np.int64)

    exact = len(copies) <= config.limits.exact_copies_cap
    support = None
    if exact:
        support = ExactSupport(
            base_laws=(((Fraction(0), 1 - p), (Fraction(1), p)),) * n_edges,
            parents=tuple(copies),
            statistic=lambda i, values: math.prod(values) - pe,
            raw_variance=_pair_variance(copies, p),
        )

    def sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        edges = (rng.random((size, n_edges)) < fp).astype(float)
        return edges[:, copy_idx].prod(axis=2) - fpe

    def sum_sampler(rng: np.random.Generator, size: int) -> np.ndarray:
        return sample_counts(spec, rng, size) - len(copies) * fpe

    model = LocalModel(
        name=f"erg-{spec.name}",
        index_set=IndexSet(tuple(copies)),
        neighborhoods=FootprintNeighborhoods(copies, depth=depth, config=config.limits),
        sampler=sampler,
        exact_support=support,
        sum_sampler=sum_sampler,
        params={"n": spec.n, "p": str(p), "motif": spec.name, "copies": len(copies)},
    )
    if exact:
        return standardize(model, EstimationMode.EXACT)
    return standardize(model, EstimationMode.MC, config=config)


# --- Comptage sur un graphe observe ----------------------------------------


def _as_graph(adjacency) -> nx.Graph:
    if isinstance(adjacency, nx.Graph):
        return adjacency
    matrix = np.asarray(adjacency)
    graph = nx.Graph()
    graph.add_nodes_from(range(matrix.shape[0]))
    rows, cols = np.nonzero(np.triu(matrix, k=1))
    graph.add_edges_from(zip(rows.tolist(), cols.tolist()))
    return graph


def _triangle_count(graph: nx.Graph) -> int:
    """Triangles par coins orientes selon (degre, sommet), voisins en entiers-bitsets."""
    order = sorted(graph.nodes, key=lambda v: (graph.degree(v), v))
    rank = {v: k for k, v in enumerate(order)}
    forward = [0] * len(order)
    for u, v in graph.edges:
        ru, rv = rank[u], rank[v]
        if ru < rv:
            forward[ru] |= 1 << rv
        else:
            forward[rv] |= 1 << ru

    total = 0
    for ru, fu in enumerate(forward):
        bits = fu
        while bits:
            low = bits & -bits
            total += bin(fu & forward[low.bit_length() - 1]).count("1")
            bits ^= low
    return total


def count_copies(adjacency, motif: nx.Graph) -> int:
    """Copies (non induites) de motif dans le graphe donne."""
    graph = _as_graph(adjacency)
    core = _core(motif)
    if core.number_of_edges() == 0 or graph.number_of_edges() == 0:
        return 0
    if _is_edge(core):
        return graph.number_of_edges()
    if _is_triangle(core):
        return _triangle_count(graph)
    matcher = isomorphism.GraphMatcher(graph, core)
    embeddings = sum(1 for _ in matcher.subgraph_monomorphisms_iter())
    return embeddings // automorphism_count(core)


def sample_adjacency(rng: np.random.Generator, n: int, p: float, size: int) -> np.ndarray:
    """Lot (size, n, n) de matrices d'adjacence de K(n, p)."""
    upper = np.triu(rng.random((size, n, n)) < p, k=1)
    return (upper | upper.transpose(0, 2, 1)).astype(float)


def triangle_counts_dense(batch: np.ndarray) -> np.ndarray:
    """Triangles de chaque graphe du lot: tr(A^3) / 6."""
    batch = np.asarray(batch, dtype=float)
    square = batch @ batch
    return np.rint((square * batch).sum(axis=(1, 2)) / 6.0)


def sample_counts(spec: GraphSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """Tirages de S = nombre de copies de G dans K(n,p)."""
    fp = float(spec.p)
    if _is_edge(spec.core):
        return rng.binomial(comb(spec.n, 2), fp, size=size).astype(float)
    if _is_triangle(spec.core):
        chunk = max(1, get_config().montecarlo.chain_chunk // (spec.n * spec.n))
        return np.concatenate([
            triangle_counts_dense(sample_adjacency(rng, spec.n, fp, min(chunk, size - start)))
            for start in range(0, size, chunk)
        ])
    out = np.empty(size)
    for k in range(size):
        out[k] = count_copies(sample_adjacency(rng, spec.n, fp, 1)[0], spec.core)
    return out


# --- Quantites de la borne -------------------------------------------------


def psi(n: int, p, motif: nx.Graph) -> float:
    """
    min sur H sous-graphe de G avec e(H) >= 1 de n^v(H) p^e(H).

    Pour un ensemble de sommets fixe le minimum est atteint par le
    sous-graphe induit; on enumere donc les sous-ensembles de sommets.
    """
    if motif.number_of_nodes() > 8:
        raise ConfigError(f"v(G) = {motif.number_of_nodes()} > 8")
    p = float(p)
    if not 0 < p < 1:
        raise ConfigError(f"p doit etre dans (0,1) (recu {p})")
    best = math.inf
    nodes = list(motif.nodes)
    for size in range(2, len(nodes) + 1):
        for subset in combinations(nodes, size):
            e_h = motif.subgraph(subset).number_of_edges()
            if e_h >= 1:
                best = min(best, size * log(n) + e_h * log(p))
    if best == math.inf:
        raise ConfigError("le motif doit avoir au moins une arete")
    return exp(best)


def graph_bound_functional(n: int, p, motif: nx.Graph) -> float:
    """psi^{-1/2} si p <= 1/2, sinon n^{-1} (1-p)^{-1/2}."""
    p = float(p)
    if not 0 < p < 1:
        raise ConfigError(f"p doit etre dans (0,1) (recu {p})")
    if p <= 0.5:
        return psi(n, p, motif) ** -0.5
    return 1.0 / (n * math.sqrt(1.0 - p))


def subgraph_variance(
    n: int,
    p,
    motif: nx.Graph,
    mode=EstimationMode.EXACT,
    seed: int = 0,
    replicates: Optional[int] = None,
    config: Optional[AppConfig] = None,
) -> MomentEstimate:
    """
    Var(S) pour S le nombre de copies de G dans K(n,p).

    Exact: somme sur les paires de copies partageant une arete (au plus
    limits.exact_copies_cap copies). Mc: variance empirique de S.
    """
    config = config or get_config()
    mode = EstimationMode.parse(mode)
    spec = GraphSpec(get_motif(motif), n, p)

    if mode == EstimationMode.EXACT:
        copies = enumerate_copies(spec, config.limits.exact_copies_cap)
        return MomentEstimate.from_exact(_pair_variance(copies, spec.p))

    replicates = replicates or config.montecarlo.sigma_replicates
    center = spec.expected_copies() * float(spec.p) ** spec.e

    def batch(index: int, size: int) -> np.ndarray:
        t = sample_counts(spec, stream(seed, "sigma", index), size) - center
        return np.column_stack([t, t * t])

    acc_t, acc_t2 = run_replicates(replicates, batch, 2, config.montecarlo)
    variance = acc_t2.mean - acc_t.mean ** 2
    return MomentEstimate.from_mc(variance, acc_t2.std_error, acc_t2.count)


def closed_form_variance(spec: GraphSpec) -> Optional[Fraction]:
    """Var(S) en forme close pour l'arete et le triangle, None sinon.

    Deux triangles distincts partagent au plus une arete; chaque triangle
    en rencontre 3 (n-3) autres.
    """
    p = spec.p
    if _is_edge(spec.core):
        return comb(spec.n, 2) * p * (1 - p)
    if _is_triangle(spec.core):
        copies = comb(spec.n, 3)
        return copies * (p ** 3 - p ** 6) + copies * 3 * (spec.n - 3) * (p ** 5 - p ** 6)
    return None


def graph_variance(spec: GraphSpec, seed: int = 0, config: Optional[AppConfig] = None) -> float:
    """Var(S): forme close, sinon somme exacte sur les paires, sinon Monte Carlo."""
    config = config or get_config()
    closed = closed_form_variance(spec)
    if closed is not None:
        return float(closed)
    if spec.expected_copies() <= config.limits.exact_copies_cap:
        return float(_pair_variance(enumerate_copies(spec, config.limits.exact_copies_cap), spec.p))
    return subgraph_variance(spec.n, spec.p, spec.motif, EstimationMode.MC, seed=seed, config=config).value


def variance_lower_bound_ratio(n: int, p, motif: nx.Graph, config: Optional[AppConfig] = None) -> float:
    """sigma^2 / ((1-p) n^(2v) p^(2e) / psi): diagnostic, doit rester loin de 0."""
    spec = GraphSpec(get_motif(motif), n, p)
    sigma_sq = subgraph_variance(n, p, spec.motif, EstimationMode.EXACT, config=config).value
    fp = float(spec.p)
    # en log: n^(2v) deborde vite
    log_scale = (
        math.log1p(-fp) + 2 * spec.v * math.log(n) + 2 * spec.e * math.log(fp)
        - math.log(psi(n, fp, spec.core))
    )
    return math.exp(math.log(sigma_sq) - log_scale)
