from .config import ExperimentConfig
from .rates import RateFit, RateFitError, fit_rate, inversions, ratio_band
from .runner import CORE_COLUMNS, RunStats, run_experiment
from .targets import MODELS, RateTarget, build_target

__all__ = [
    "ExperimentConfig",
    "RateFit",
    "RateFitError",
    "fit_rate",
    "inversions",
    "ratio_band",
    "CORE_COLUMNS",
    "RunStats",
    "run_experiment",
    "MODELS",
    "RateTarget",
    "build_target",
]
