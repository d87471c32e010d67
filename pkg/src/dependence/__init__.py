from .neighborhoods import (
    NeighborhoodSystem,
    FootprintNeighborhoods,
    ExplicitNeighborhoods,
    singleton_neighborhoods,
    iter_chains,
    chain_array,
    beta_chain_arrays,
)
from .checks import (
    Violation,
    ValidationReport,
    IndependenceCheck,
    validate_neighborhoods,
    empirical_independence_check,
    standardize,
)

__all__ = [
    "NeighborhoodSystem",
    "FootprintNeighborhoods",
    "ExplicitNeighborhoods",
    "singleton_neighborhoods",
    "iter_chains",
    "chain_array",
    "beta_chain_arrays",
    "Violation",
    "ValidationReport",
    "IndependenceCheck",
    "validate_neighborhoods",
    "empirical_independence_check",
    "standardize",
]
