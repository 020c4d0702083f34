"""Parameter estimation

Characteristic-function regressions for (alpha, H) and the first-moment estimate of sigma."""

from .estimator import EstimationConfig, EstimationResult, RegressionFit, estimate_lfsm, estimator_study

__all__ = [
    "EstimationConfig",
    "EstimationResult",
    "RegressionFit",
    "estimate_lfsm",
    "estimator_study",
]
