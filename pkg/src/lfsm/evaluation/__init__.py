"""Forecast evaluation

L^p residual norms, hit ratios, the simulation study and the rolling backtest."""

from .backtest import BacktestReport, run_backtest, run_backtest_multi
from .metrics import HitRatio, LpErrorQuery, fbm_hit_ratio, hit_ratio, lp_error_curve, lp_residual_norm
from .study import StudyConfig, run_simulation_study

__all__ = [
    "BacktestReport",
    "run_backtest",
    "run_backtest_multi",
    "HitRatio",
    "LpErrorQuery",
    "fbm_hit_ratio",
    "hit_ratio",
    "lp_error_curve",
    "lp_residual_norm",
    "StudyConfig",
    "run_simulation_study",
]
