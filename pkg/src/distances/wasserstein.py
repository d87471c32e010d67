"""
Distances sur la droite reelle: W_p empirique exacte, W_p contre N(0,1)
par couplage des quantiles, distance de Kolmogorov, minorants de Zolotarev.
"""

from typing import Iterable, Optional

import numpy as np
from scipy import stats

from ..config import SteinConfig
from ..errors import ConfigError, SampleSizeError
from ..models import EmpiricalSample
from ..rng import stream
from ..stein.normal import evaluate, normal_cdf, normal_functional, normal_quantile
from ..stein.testfunctions import TestFunction, as_test_function, family as class_family


# Taille minimale pour les comparaisons a N(0,1)
MIN_NORMAL_SAMPLE = 100

DISTANCES = ("w1", "w2", "w3", "kolmogorov", "zolotarev")


def _check_p(p: float) -> float:
    p = float(p)
    if p < 1:
        raise ConfigError(f"p doit etre >= 1 (recu {p})")
    return p


def empirical_wp(a: EmpiricalSample, b: EmpiricalSample, p: float) -> float:
    """W_p exacte entre deux empiriques de meme taille (couplage trie)."""
    p = _check_p(p)
    if a.size != b.size:
        raise SampleSizeError(f"tailles differentes: {a.size} et {b.size} (pas d'interpolation)")
    diff = np.abs(a.values - b.values)
    return float(np.mean(diff ** p) ** (1.0 / p))


def normal_quantile_grid(s: int) -> np.ndarray:
    """Phi^{-1}((i - 1/2)/s), i = 1..s."""
    if s < 1:
        raise SampleSizeError(f"taille de grille invalide: {s}")
    return normal_quantile((np.arange(1, s + 1) - 0.5) / s)


def normal_grid_sample(s: int) -> EmpiricalSample:
    return EmpiricalSample.from_values(normal_quantile_grid(s), provenance="normal-grid")


def wp_vs_normal(a: EmpiricalSample, p: float) -> float:
    """W_p(L(a), N(0,1)) par la regle des quantiles au point milieu."""
    p = _check_p(p)
    if a.size < MIN_NORMAL_SAMPLE:
        raise SampleSizeError(f"au moins {MIN_NORMAL_SAMPLE} valeurs requises (recu {a.size})")
    diff = np.abs(a.values - normal_quantile_grid(a.size))
    return float(np.mean(diff ** p) ** (1.0 / p))


def kolmogorov_vs_normal(a: EmpiricalSample) -> float:
    """sup_x |F_s(x) - Phi(x)| evalue aux points de l'echantillon."""
    s = a.size
    cdf = normal_cdf(a.values)
    i = np.arange(1, s + 1)
    return float(np.max(np.maximum(np.abs(i / s - cdf), np.abs((i - 1) / s - cdf))))


def zolotarev_lower_bound(
    a: EmpiricalSample,
    p: int,
    family: Optional[Iterable] = None,
    config: Optional[SteinConfig] = None,
) -> float:
    """
    max sur la famille de |moyenne de f sur a - Nf|.

    Minorant de Z_p(L(a), N(0,1)) a l'erreur Monte Carlo pres. Tous les
    membres doivent etre declares dans Lambda_p.
    """
    if p not in (2, 3):
        raise ConfigError(f"p doit valoir 2 ou 3 (recu {p})")
    members: list[TestFunction] = (
        class_family(p) if family is None else [as_test_function(f) for f in family]
    )
    if not members:
        raise ConfigError("famille de fonctions test vide")
    outside = [tf.name for tf in members if not tf.in_class(p)]
    if outside:
        raise ConfigError(f"fonctions hors de Lambda_{p}: {', '.join(outside)}")

    best = 0.0
    for tf in members:
        gap = abs(float(np.mean(evaluate(tf.func, a.values))) - normal_functional(tf, config))
        best = max(best, gap)
    return best


def distance_vs_normal(a: EmpiricalSample, distance: str) -> float:
    """Distance configuree (w1|w2|w3|kolmogorov|zolotarev) contre N(0,1)."""
    if distance in ("w1", "w2", "w3"):
        return wp_vs_normal(a, int(distance[1]))
    if distance == "kolmogorov":
        return kolmogorov_vs_normal(a)
    if distance == "zolotarev":
        return zolotarev_lower_bound(a, 2)
    raise ConfigError(f"distance inconnue: {distance!r} ({'|'.join(DISTANCES)})")


def normal_control_sample(s: int, seed: int, *indices: int) -> EmpiricalSample:
    """Echantillon i.i.d. N(0,1) de taille s (controle de meme taille)."""
    rng = stream(seed, "baseline", *indices)
    values = stats.norm.rvs(size=s, random_state=rng)
    return EmpiricalSample.from_values(values, provenance=f"baseline:seed={seed}")


def baseline_floor(s: int, distance: str, seed: int, *indices: int) -> float:
    """Plancher d'echantillonnage b(s): distance d'un controle normal de taille s."""
    return distance_vs_normal(normal_control_sample(s, seed, *indices), distance)


def zolotarev_wp_diagnostic(a: EmpiricalSample, p: int) -> dict:
    """Z_p minore et W_p empirique, pour suivi de tendance (pas d'assertion)."""
    z = zolotarev_lower_bound(a, p)
    return {
        "zolotarev_lower": z,
        "zolotarev_root": z ** (1.0 / p),
        f"w{p}": wp_vs_normal(a, p),
    }
