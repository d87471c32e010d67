"""
Ajustement de la pente log-log de la distance moyenne en fonction de n.
"""

from dataclasses import dataclass, field
from typing import Union
import math

import numpy as np
import pandas as pd

from ..errors import NumericalError


class RateFitError(NumericalError):
    """Pas assez de points au-dessus du plancher d'echantillonnage."""
    pass


@dataclass
class RateFit:
    """Pente, ordonnee a l'origine et r^2 de log(distance) ~ log(n)."""

    slope: float
    intercept: float
    r_squared: float
    baseline_floor: dict[int, float] = field(default_factory=dict)
    used: tuple[int, ...] = ()
    excluded: tuple[int, ...] = ()

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "used": list(self.used),
            "excluded": list(self.excluded),
        }


def fit_rate(
    table: Union[pd.DataFrame, list[dict]],
    floor_factor: float = 3.0,
    min_points: int = 3,
) -> RateFit:
    """
    Moindres carres de log(distance moyenne) contre log(n).

    Seuls les n dont la distance moyenne depasse floor_factor fois le
    plancher moyen b(s) sont retenus.

    Raises:
        RateFitError: moins de min_points points utilisables
    """
    df = pd.DataFrame(table)
    if df.empty or "n" not in df.columns or "distance" not in df.columns:
        raise RateFitError("table vide ou sans colonnes n/distance")
    if "error" in df.columns:
        df = df[df["error"].isna()]
    df = df[np.isfinite(df["distance"].astype(float))]
    if "baseline" not in df.columns:
        df = df.assign(baseline=0.0)

    grouped = df.groupby("n", sort=True).agg(distance=("distance", "mean"), baseline=("baseline", "mean"))
    floors = {int(n): float(b) for n, b in grouped["baseline"].items()}
    usable = grouped[(grouped["distance"] > 0) & (grouped["distance"] >= floor_factor * grouped["baseline"])]
    excluded = tuple(int(n) for n in grouped.index if n not in usable.index)

    if len(usable) < min_points:
        raise RateFitError(
            f"signal below sampling floor; increase s ({len(usable)} point(s) utilisable(s), {min_points} requis)"
        )

    x = np.log(usable.index.to_numpy(dtype=float))
    y = np.log(usable["distance"].to_numpy(dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    total = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 - float(np.sum(residual ** 2)) / total if total > 0 else 1.0

    return RateFit(
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        baseline_floor=floors,
        used=tuple(int(n) for n in usable.index),
        excluded=excluded,
    )


def inversions(table: Union[pd.DataFrame, list[dict]]) -> int:
    """Nombre de hausses de la distance moyenne entre n consecutifs."""
    df = pd.DataFrame(table)
    means = df.groupby("n", sort=True)["distance"].mean().to_numpy()
    return int(np.sum(np.diff(means) >= 0))


def ratio_band(values: list[float]) -> float:
    """max / min d'une liste de valeurs positives."""
    if not values or min(values) <= 0:
        return math.inf
    return max(values) / min(values)
