"""
Configuration centralisee de l'outil.
Toutes les constantes numeriques (tolerances, plafonds, constantes c1/c2)
sont definies ici.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional
import os

import yaml
from dotenv import load_dotenv

from .errors import ConfigError


@dataclass
class MonteCarloConfig:
    """Parametres des estimateurs Monte Carlo."""

    # Replicats par defaut pour les moments / gamma
    replicates: int = 100_000

    # Taille des lots (un lot = un flux Philox)
    batch_size: int = 2_000

    # Threads pour l'evaluation des lots
    workers: int = 4

    # Replicats pour estimer sigma_n quand le support n'est pas fini
    sigma_replicates: int = 100_000

    # Tirages pour le test empirique de non-degenerescence
    nondegeneracy_draws: int = 10_000
    nondegeneracy_inner: int = 200

    # Nombre max de (replicat x chaine) en memoire pour les sommes de chaines
    chain_chunk: int = 2_000_000


@dataclass
class SteinConfig:
    """Parametres de resolution de l'equation de Stein."""

    # Tolerance absolue de la quadrature
    tol: float = 1e-10

    # Ordres de Gauss-Hermite essayes successivement
    hermite_orders: tuple[int, ...] = (64, 128, 192)

    # Pas initial des differences centrales (Richardson: h0, h0/2)
    fd_step: float = 1e-3

    # Grille par defaut pour les verifications
    grid_min: float = -3.0
    grid_max: float = 3.0
    grid_step: float = 1e-3

    # Facteur de croissance du quotient au-dela duquel on signale une violation
    blowup_ratio: float = 1.5

    # Quotients sous ce niveau: bruit de quadrature, jamais une violation
    quotient_floor: float = 1e-6


@dataclass
class MatchingConfig:
    """Constantes des lois discretes d'appariement des cumulants."""

    # Plafond admissible pour |beta|
    c1: Fraction = Fraction(1)

    # n = floor(c2 / beta^2) pour la loi a quatre points
    c2: Fraction = Fraction(1, 4)

    # c2' pour la loi a cinq points (reduit automatiquement si besoin)
    c2_five: Fraction = Fraction(1, 10)

    # En dessous de ce c2' on abandonne
    shrink_floor: Fraction = Fraction(1, 1_000_000)


@dataclass
class LimitsConfig:
    """Plafonds de materialisation."""

    # Voisinages materialises si |I| <= eager_limit, calcules a la demande sinon
    eager_limit: int = 100_000

    # Enumeration conjointe complete autorisee jusqu'a ce nombre d'issues
    joint_outcomes_cap: int = 2 ** 25

    # Copies de G materialisees par erg_model
    copies_cap: int = 1_000_000

    # Copies autorisees pour la variance exacte par paires
    exact_copies_cap: int = 100_000


@dataclass
class ExperimentDefaults:
    """Valeurs par defaut des etudes de vitesse."""

    distance: str = "w2"
    samples: int = 10_000
    replicates: int = 20
    seed: int = 20190101
    output_format: str = "csv"
    output_dir: Path = field(default_factory=lambda: Path("data/results"))


@dataclass
class AppConfig:
    """Configuration globale de l'application."""

    montecarlo: MonteCarloConfig = field(default_factory=MonteCarloConfig)
    stein: SteinConfig = field(default_factory=SteinConfig)
    matching: MatchingConfig = field(default_factory=MatchingConfig)
    limits: LimitsConfig = field(default_factory=LimitsConfig)
    experiment: ExperimentDefaults = field(default_factory=ExperimentDefaults)

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> "AppConfig":
        """Charge la config depuis un fichier YAML + variables d'environnement.

        Les variables d'environnement (apres lecture de .env) ont priorite:
        - STEINLOCAL_CONFIG   chemin du fichier YAML
        - STEINLOCAL_SEED     graine par defaut des experiences
        - STEINLOCAL_WORKERS  nombre de threads Monte Carlo
        """
        load_dotenv()
        config = cls()

        if config_path is None:
            config_path = Path(os.environ.get("STEINLOCAL_CONFIG", "config.yaml"))

        if config_path.exists():
            with open(config_path) as f:
                data = yaml.safe_load(f) or {}

            if not isinstance(data, dict):
                raise ConfigError(f"{config_path}: document YAML attendu sous forme de mapping")

            for section in ("montecarlo", "stein", "limits", "experiment"):
                if section in data:
                    target = getattr(config, section)
                    for key, value in (data[section] or {}).items():
                        if not hasattr(target, key):
                            raise ConfigError(f"{config_path}: cle inconnue {section}.{key}")
                        if key == "hermite_orders":
                            value = tuple(int(v) for v in value)
                        if key == "output_dir":
                            value = Path(value)
                        setattr(target, key, value)

            # Les constantes c1/c2 sont lues en rationnels ("1/4" accepte)
            if "matching" in data:
                for key, value in (data["matching"] or {}).items():
                    if not hasattr(config.matching, key):
                        raise ConfigError(f"{config_path}: cle inconnue matching.{key}")
                    try:
                        setattr(config.matching, key, Fraction(str(value)))
                    except (ValueError, ZeroDivisionError) as e:
                        raise ConfigError(f"matching.{key}: {value!r} n'est pas un rationnel") from e

        if os.environ.get("STEINLOCAL_SEED"):
            config.experiment.seed = int(os.environ["STEINLOCAL_SEED"])
        if os.environ.get("STEINLOCAL_WORKERS"):
            config.montecarlo.workers = max(1, int(os.environ["STEINLOCAL_WORKERS"]))

        return config

    def save(self, config_path: Optional[Path] = None) -> None:
        """Sauvegarde la config dans un fichier YAML."""
        if config_path is None:
            config_path = Path("config.yaml")

        data = {
            "montecarlo": {
                "replicates": self.montecarlo.replicates,
                "batch_size": self.montecarlo.batch_size,
                "workers": self.montecarlo.workers,
                "sigma_replicates": self.montecarlo.sigma_replicates,
                "nondegeneracy_draws": self.montecarlo.nondegeneracy_draws,
                "nondegeneracy_inner": self.montecarlo.nondegeneracy_inner,
                "chain_chunk": self.montecarlo.chain_chunk,
            },
            "stein": {
                "tol": self.stein.tol,
                "hermite_orders": list(self.stein.hermite_orders),
                "fd_step": self.stein.fd_step,
                "grid_min": self.stein.grid_min,
                "grid_max": self.stein.grid_max,
                "grid_step": self.stein.grid_step,
                "blowup_ratio": self.stein.blowup_ratio,
                "quotient_floor": self.stein.quotient_floor,
            },
            "matching": {
                "c1": str(self.matching.c1),
                "c2": str(self.matching.c2),
                "c2_five": str(self.matching.c2_five),
                "shrink_floor": str(self.matching.shrink_floor),
            },
            "limits": {
                "eager_limit": self.limits.eager_limit,
                "joint_outcomes_cap": self.limits.joint_outcomes_cap,
                "copies_cap": self.limits.copies_cap,
                "exact_copies_cap": self.limits.exact_copies_cap,
            },
            "experiment": {
                "distance": self.experiment.distance,
                "samples": self.experiment.samples,
                "replicates": self.experiment.replicates,
                "seed": self.experiment.seed,
                "output_format": self.experiment.output_format,
                "output_dir": str(self.experiment.output_dir),
            },
        }

        config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(config_path, "w") as f:
            yaml.dump(data, f, default_flow_style=False, allow_unicode=True)


# Singleton global
_config: Optional[AppConfig] = None


def get_config() -> AppConfig:
    """Retourne la configuration globale (singleton)."""
    global _config
    if _config is None:
        _config = AppConfig.load()
    return _config


def reload_config(config_path: Optional[Path] = None) -> AppConfig:
    """Recharge la configuration."""
    global _config
    _config = AppConfig.load(config_path)
    return _config
