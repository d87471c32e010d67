"""
Construction des modeles par nom (CLI, scripts).
"""

from fractions import Fraction
from typing import Optional

from ..config import AppConfig, get_config
from ..errors import ConfigError
from ..matching import five_point_law, four_point_law, law_model
from ..models import LocalModel
from .graphs import GraphSpec, erg_model
from .iid import duplicated_pairs_model, iid_model
from .mdep import mdep_model
from .ustat import SymmetricQuadraticKernel, UStatSpec, ustat_model


MODEL_KINDS = ("iid", "pairs", "mdep", "ustat", "erg", "law")


def build_model(
    kind: str,
    n: int,
    params: Optional[dict] = None,
    seed: int = 0,
    depth: int = 3,
    config: Optional[AppConfig] = None,
) -> LocalModel:
    """
    Modele standardise de type kind.

    Parametres reconnus: law (iid, mdep, ustat), m (mdep), a/b/c (ustat),
    motif/p (erg), beta/kappa4 (law). Pour pairs, n est le nombre de paires.
    """
    params = dict(params or {})
    config = config or get_config()
    if kind == "iid":
        return iid_model(n, params.get("law", "rademacher"), depth)
    if kind == "pairs":
        return duplicated_pairs_model(n, depth)
    if kind == "mdep":
        return mdep_model(
            n, int(params.get("m", 2)), params.get("law", "rademacher"),
            params.get("coefficients"), depth=depth, seed=seed,
        )
    if kind == "ustat":
        kernel = SymmetricQuadraticKernel(
            params.get("a", Fraction(1, 2)), params.get("b", Fraction(1, 10)), params.get("c", 0)
        )
        spec = UStatSpec(n, kernel, base_law=params.get("law", "rademacher"), seed=seed)
        return ustat_model(spec, depth=depth, config=config)
    if kind == "erg":
        spec = GraphSpec.named(params.get("motif", "triangle"), n, params.get("p", "0.5"))
        return erg_model(spec, depth=depth, config=config)
    if kind == "law":
        beta = params.get("beta", "0.1")
        if params.get("kappa4") is not None:
            law = five_point_law(beta, params["kappa4"], config.matching)
        else:
            law = four_point_law(beta, config.matching)
        return law_model(law, depth=max(depth, 5))
    raise ConfigError(f"modele inconnu: {kind!r} ({'|'.join(MODEL_KINDS)})")
