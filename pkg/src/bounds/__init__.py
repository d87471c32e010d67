from .conjecture import (
    EPlacement,
    enumerate_e_placements,
    compute_Rm,
    conjecture_terms,
    wp_conjecture_functional,
)
from .theorem1 import (
    BoundReport,
    theorem1_terms,
    w2_bound_functional,
    mdep_bound_functional,
    per_index_moments,
    corollary1_functional,
    iid_wp_bound,
    theorem3_rate,
)

__all__ = [
    "EPlacement",
    "enumerate_e_placements",
    "compute_Rm",
    "conjecture_terms",
    "wp_conjecture_functional",
    "BoundReport",
    "theorem1_terms",
    "w2_bound_functional",
    "mdep_bound_functional",
    "per_index_moments",
    "corollary1_functional",
    "iid_wp_bound",
    "theorem3_rate",
]
