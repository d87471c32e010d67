"""
Hierarchie des erreurs de l'outil.

Deux familles seulement sont visibles depuis la CLI:
- ConfigError    -> code de sortie 2
- NumericalError -> code de sortie 3
"""


class SteinLocalError(Exception):
    """Erreur racine."""
    pass


class ConfigError(SteinLocalError):
    """Configuration ou parametres d'entree invalides."""
    pass


class NumericalError(SteinLocalError):
    """Echec numerique (quadrature, derivation, estimation)."""
    pass


class DegenerateSumError(NumericalError):
    """Var(W) = 0: la somme ne peut pas etre standardisee."""
    pass


class ExactModeUnavailableError(ConfigError):
    """Mode exact demande sur un modele sans support exact."""
    pass


class UnstandardizedModelError(ConfigError):
    """Operation qui exige E W^2 = 1 sur un modele non standardise."""
    pass


class InsufficientDepthError(ConfigError):
    """Systeme de voisinages trop peu profond pour la fonctionnelle demandee."""
    pass


class SampleSizeError(ConfigError):
    """Echantillon trop petit ou tailles incompatibles."""
    pass
