from .wasserstein import (
    DISTANCES,
    empirical_wp,
    normal_quantile_grid,
    normal_grid_sample,
    wp_vs_normal,
    kolmogorov_vs_normal,
    zolotarev_lower_bound,
    distance_vs_normal,
    normal_control_sample,
    baseline_floor,
    zolotarev_wp_diagnostic,
)

__all__ = [
    "DISTANCES",
    "empirical_wp",
    "normal_quantile_grid",
    "normal_grid_sample",
    "wp_vs_normal",
    "kolmogorov_vs_normal",
    "zolotarev_lower_bound",
    "distance_vs_normal",
    "normal_control_sample",
    "baseline_floor",
    "zolotarev_wp_diagnostic",
]
