from .base import BaseLaw, bernoulli, finite, normal, parse_base_law, rademacher
from .iid import (
    iid_model,
    rademacher_model,
    bernoulli_model,
    finite_law_model,
    normal_surrogate_model,
    duplicated_pairs_model,
)
from .mdep import mdep_model
from .registry import MODEL_KINDS, build_model
from .ustat import (
    DegenerateKernelError,
    SymmetricQuadraticKernel,
    UStatSpec,
    check_symmetry,
    empirical_nondegeneracy,
    hoeffding_components,
    hoeffding_variance,
    neighborhood_ratio,
    ustat_model,
)
from .graphs import (
    CopyCapExceededError,
    GraphSpec,
    MOTIFS,
    automorphism_count,
    closed_form_variance,
    count_copies,
    enumerate_copies,
    erg_model,
    get_motif,
    graph_bound_functional,
    graph_variance,
    load_motif,
    psi,
    sample_adjacency,
    sample_counts,
    subgraph_variance,
    triangle_counts_dense,
    variance_lower_bound_ratio,
)

__all__ = [
    "BaseLaw",
    "bernoulli",
    "finite",
    "normal",
    "parse_base_law",
    "rademacher",
    "iid_model",
    "rademacher_model",
    "bernoulli_model",
    "finite_law_model",
    "normal_surrogate_model",
    "duplicated_pairs_model",
    "mdep_model",
    "MODEL_KINDS",
    "build_model",
    "DegenerateKernelError",
    "SymmetricQuadraticKernel",
    "UStatSpec",
    "check_symmetry",
    "empirical_nondegeneracy",
    "hoeffding_components",
    "hoeffding_variance",
    "neighborhood_ratio",
    "ustat_model",
    "CopyCapExceededError",
    "GraphSpec",
    "MOTIFS",
    "automorphism_count",
    "closed_form_variance",
    "count_copies",
    "enumerate_copies",
    "erg_model",
    "get_motif",
    "graph_bound_functional",
    "graph_variance",
    "load_motif",
    "psi",
    "sample_adjacency",
    "sample_counts",
    "subgraph_variance",
    "triangle_counts_dense",
    "variance_lower_bound_ratio",
]
