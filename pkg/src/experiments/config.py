"""
Configuration d'une etude de vitesse (fichier YAML plat + surcharges CLI).
"""

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

import yaml

from ..config import get_config
from ..distances import DISTANCES
from ..errors import ConfigError
from .targets import MODELS


FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ExperimentConfig:
    """Etude: modele, grille de n, R replicats de s tirages par point.

    Les cles inconnues du fichier sont des parametres du modele (m, law,
    motif, p, beta, kappa4, a, b, c, coefficients).
    """

    model: str
    grid: tuple[int, ...]
    replicates: int = 20
    samples: int = 10_000
    distance: str = "w2"
    seed: int = 20190101
    output: Optional[Path] = None
    output_format: str = "csv"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(int(n) for n in self.grid))
        if self.model not in MODELS:
            raise ConfigError(f"modele inconnu: {self.model!r} ({'|'.join(MODELS)})")
        if not self.grid:
            raise ConfigError("grille vide")
        if self.model == "law" and len(self.grid) != 1:
            raise ConfigError("law: un seul point de grille (n est fixe par la loi)")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ConfigError(f"grille non strictement croissante: {self.grid}")
        if self.replicates < 1:
            raise ConfigError(f"R doit etre >= 1 (recu {self.replicates})")
        if self.samples < 100:
            raise ConfigError(f"s doit etre >= 100 (recu {self.samples})")
        if self.distance not in DISTANCES:
            raise ConfigError(f"distance inconnue: {self.distance!r} ({'|'.join(DISTANCES)})")
        if self.output_format not in FORMATS:
            raise ConfigError(f"format inconnu: {self.output_format!r} (csv|json)")
        if self.seed < 0:
            raise ConfigError(f"seed doit etre >= 0 (recu {self.seed})")

    @classmethod
    def defaults(cls, model: str, grid) -> "ExperimentConfig":
        """Etude avec les valeurs par defaut de la configuration globale."""
        exp = get_config().experiment
        return cls(
            model=model,
            grid=tuple(grid),
            replicates=exp.replicates,
            samples=exp.samples,
            distance=exp.distance,
            seed=exp.seed,
            output_format=exp.output_format,
        )

    @classmethod
    def from_file(cls, path: Path) -> "ExperimentConfig":
        """Charge un fichier YAML plat (cle: valeur)."""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"fichier d'experience introuvable: {path}")
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: document cle/valeur attendu")
        nested = [k for k, v in data.items() if isinstance(v, dict)]
        if nested:
            raise ConfigError(f"{path}: format plat attendu (cles imbriquees: {', '.join(nested)})")
        if "model" not in data or "grid" not in data:
            raise ConfigError(f"{path}: cles 'model' et 'grid' obligatoires")

        base = cls.defaults(data.pop("model"), data.pop("grid"))
        known = {f.name for f in fields(cls)} - {"model", "grid", "params"}
        if "format" in data:
            data["output_format"] = data.pop("format")
        overrides = {k: data.pop(k) for k in list(data) if k in known}
        if "output" in overrides and overrides["output"] is not None:
            overrides["output"] = Path(overrides["output"])
        return base.with_overrides(params=data, **overrides)

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """Copie avec les valeurs non None remplacees (params fusionnes)."""
        params = overrides.pop("params", None)
        values = {k: v for k, v in overrides.items() if v is not None}
        if params:
            values["params"] = {**self.params, **{k: v for k, v in params.items() if v is not None}}
        return replace(self, **values)

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "grid": list(self.grid),
            "replicates": self.replicates,
            "samples": self.samples,
            "distance": self.distance,
            "seed": self.seed,
            "output": str(self.output) if self.output else None,
            "format": self.output_format,
            **self.params,
        }
