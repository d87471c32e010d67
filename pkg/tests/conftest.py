import os
import sys
from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

# Racine du depot dans le path (src/ et cli.py)
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.applications import mdep_model
from src.config import AppConfig, MonteCarloConfig


@pytest.fixture
def app_config() -> AppConfig:
    """Configuration par defaut, budgets Monte Carlo reduits pour les tests."""
    config = AppConfig()
    config.montecarlo = replace(
        MonteCarloConfig(),
        replicates=20_000,
        batch_size=2_000,
        workers=2,
        sigma_replicates=20_000,
        nondegeneracy_draws=4_000,
        nondegeneracy_inner=100,
    )
    return config


@pytest.fixture
def tmp_yaml(tmp_path):
    """Ecrit un document YAML dans un fichier temporaire."""
    def write(text: str, name: str = "experiment.yaml"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write


@pytest.fixture
def random_small_model():
    """Moyenne mobile d'ordre 1 a bruit de Bernoulli, tiree selon le numero de cas."""
    def build(case: int):
        rng = np.random.default_rng(case)
        q = Fraction(int(rng.integers(1, 10)), 10)
        coefficients = tuple(int(c) for c in rng.integers(1, 4, size=2))
        return mdep_model(int(rng.integers(3, 6)), 1, f"bernoulli:{q}", coefficients)
    return build
