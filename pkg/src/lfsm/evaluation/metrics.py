"""
Forecast quality metrics: L^p norm of the forecast residual, hit ratio, and the fBm hit-ratio baseline
"""

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np
import polars as pl

from lfsm.core.stable import abs_moment, validate_alpha
from lfsm.decomposition.solver import solve_coefficients, solve_or_none
from lfsm_common.constants import DEFAULT_TOL
from lfsm_common.exceptions import NoUsableForecastsError, ParameterError


@dataclass(frozen=True, slots=True)
class LpErrorQuery:
    alpha: float
    hurst: float
    d: int
    p: float

    def __post_init__(self):
        validate_alpha(self.alpha)
        if not 0.0 < self.hurst < 1.0:
            raise ParameterError(f"hurst must lie in (0, 1), got {self.hurst}")
        if self.d < 2:
            raise ParameterError(f"forecast dimension must be at least 2, got {self.d}")
        if not 0.0 < self.p < self.alpha:
            raise ParameterError(f"moment order p must lie in (0, alpha={self.alpha}), got {self.p}")


@dataclass(frozen=True, slots=True)
class HitRatio:
    hit_ratio: float
    n_hits: int
    n_usable: int
    n_no_signal: int
    n_realized_ties: int
    n_total: int


def _residual_norm(last_diagonal: float, alpha: float, p: float) -> float:
    return abs(last_diagonal) * abs_moment(alpha, p) ** (1.0 / p)


def lp_residual_norm(q: LpErrorQuery, tol: float = DEFAULT_TOL) -> float:
    """
    ||a_{1,d-1,d-1} Z||_p for a unit SaS innovation Z, the L^p norm of the one-step forecast
    residual of a standard LFSM.

    Raises:
        DecompositionError: no decomposition at (alpha, H, 1, d)
    """
    coeffs, _ = solve_coefficients(q.alpha, q.hurst, 1.0, q.d, tol)
    return _residual_norm(coeffs.a[q.d - 1, q.d - 1], q.alpha, q.p)


def lp_error_curve(
    alpha_grid: Iterable[float], hurst_grid: Iterable[float], d: int, p: float, tol: float = DEFAULT_TOL
) -> pl.DataFrame:
    """
    Residual L^p norm over the product of the grids; lp_norm is null where the decomposition
    does not exist.
    """
    rows = []
    for alpha in alpha_grid:
        for hurst in hurst_grid:
            q = LpErrorQuery(float(alpha), float(hurst), d, p)
            coeffs = solve_or_none(q.alpha, q.hurst, 1.0, d, tol)
            value = None if coeffs is None else _residual_norm(coeffs.a[d - 1, d - 1], q.alpha, p)
            rows.append({"alpha": q.alpha, "hurst": q.hurst, "d": d, "p": p, "lp_norm": value})
    return pl.DataFrame(rows, schema={"alpha": pl.Float64, "hurst": pl.Float64, "d": pl.Int64, "p": pl.Float64, "lp_norm": pl.Float64})


def fbm_hit_ratio(hurst):
    """
    Theoretical d = 2 hit ratio of an fBm: 1 - arctan(sqrt(1/x^2 - 1)) / pi with x = 2^{2H-1} - 1.

    Accepts a scalar or an array; H = 1/2 gives 0.5.
    """
    h = np.asarray(hurst, dtype=float)
    if np.any((h <= 0.0) | (h >= 1.0)):
        raise ParameterError(f"hurst must lie in (0, 1), got {hurst}")
    x = 2.0 ** (2.0 * h - 1.0) - 1.0
    with np.errstate(divide="ignore"):
        ratio = np.where(np.abs(x) < 1e-15, 0.5, 1.0 - np.arctan(np.sqrt(np.maximum(1.0 / x**2 - 1.0, 0.0))) / math.pi)
    return float(ratio) if ratio.ndim == 0 else ratio


def fbm_reference(h_grid: Iterable[float]) -> pl.DataFrame:
    h = np.asarray(list(h_grid), dtype=float)
    return pl.DataFrame({"hurst": h, "fbm_hit_ratio": np.atleast_1d(fbm_hit_ratio(h))})


def hit_ratio(predicted, realized, no_signal: Optional[np.ndarray] = None) -> HitRatio:
    """
    Share of forecasts whose sign matches the realized sign.

    predicted and realized are increments (or signs). Forecasts flagged no_signal, exactly zero
    forecasts, and exactly zero realized increments are ties and excluded.

    Raises:
        NoUsableForecastsError: every forecast is a tie
    """
    predicted_sign = np.sign(np.asarray(predicted, dtype=float))
    realized_sign = np.sign(np.asarray(realized, dtype=float))
    if predicted_sign.shape != realized_sign.shape:
        raise ParameterError(f"sign sequences differ in length: {predicted_sign.shape} vs {realized_sign.shape}")
    flat = np.zeros(predicted_sign.shape, dtype=bool) if no_signal is None else np.asarray(no_signal, dtype=bool)
    flat = flat | (predicted_sign == 0)
    realized_tie = realized_sign == 0

    usable = ~flat & ~realized_tie
    n_usable = int(usable.sum())
    n_no_signal, n_realized_ties = int(flat.sum()), int((realized_tie & ~flat).sum())
    if n_usable == 0:
        raise NoUsableForecastsError(
            f"no usable forecasts among {predicted_sign.size}",
            {"n_total": int(predicted_sign.size), "n_no_signal": n_no_signal, "n_realized_ties": n_realized_ties},
        )
    n_hits = int((predicted_sign[usable] == realized_sign[usable]).sum())
    return HitRatio(n_hits / n_usable, n_hits, n_usable, n_no_signal, n_realized_ties, int(predicted_sign.size))
