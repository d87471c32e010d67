from .accumulator import MomentAccumulator, run_replicates
from .estimators import (
    ChainTerm,
    chain_term_sums,
    cumulants_of_sum,
    exact_mixed_moment,
    exact_raw_moment,
    exact_raw_variance,
    mixed_moment,
)

__all__ = [
    "MomentAccumulator",
    "run_replicates",
    "ChainTerm",
    "chain_term_sums",
    "cumulants_of_sum",
    "exact_mixed_moment",
    "exact_raw_moment",
    "exact_raw_variance",
    "mixed_moment",
]
