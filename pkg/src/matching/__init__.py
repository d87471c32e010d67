from .laws import (
    ConstructionRegimeError,
    DiscreteLaw,
    four_point_law,
    five_point_law,
    law_moments,
    law_cumulants,
    sample_vn,
    lemma3_bound,
    law_model,
    to_fraction,
)

__all__ = [
    "ConstructionRegimeError",
    "DiscreteLaw",
    "four_point_law",
    "five_point_law",
    "law_moments",
    "law_cumulants",
    "sample_vn",
    "lemma3_bound",
    "law_model",
    "to_fraction",
]
