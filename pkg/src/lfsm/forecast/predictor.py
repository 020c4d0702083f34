"""
One-step-ahead LFSM forecast

The last d points of a series are read as an anchor X_{t-1} followed by d-1 observations. After translation
and normalisation, Y_s = (X_{t-1+s} - X_{t-1}) / sigma, s = 1..d-1, follows the decomposition at base time 1:

    Y_{i+1} = sum_{j<=i} a_{1,i,j} Z_j,     i = 0..d-2

Forward substitution recovers Z_0..Z_{d-2} and the forecast of Y_d is sum_{j<=d-2} a_{1,d-1,j} Z_j. For
alpha > 1 this is the conditional expectation; for alpha <= 1 it is the semimetric projection on the span
of the innovations.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.linalg import solve_triangular

from lfsm.core.model import LfsmParams, TimeSeries
from lfsm.decomposition.solver import DecompositionCoeffs, solve_coefficients
from lfsm_common.constants import DEFAULT_TOL, NO_SIGNAL_RTOL
from lfsm_common.enums import ForecastMethod
from lfsm_common.exceptions import IllConditionedError, ParameterError


@dataclass(frozen=True, eq=False)
class InnovationVector:
    z: np.ndarray

    def __len__(self) -> int:
        return self.z.size


@dataclass(frozen=True, eq=False)
class ForecastResult:
    predicted: float
    predicted_increment: float
    innovations: InnovationVector
    residual_scale: float
    method: ForecastMethod
    no_signal: bool

    def to_record(self) -> dict:
        return {
            "predicted": self.predicted,
            "predicted_increment": self.predicted_increment,
            "residual_scale": self.residual_scale,
            "method": self.method.value,
            "no_signal": self.no_signal,
            "innovations": self.innovations.z.tolist(),
        }


@dataclass(frozen=True, eq=False)
class ForecastBatch:
    """Rolling one-step forecasts over a whole path; entry k forecasts values[k + d] from values[k : k + d]."""

    predicted_increment: np.ndarray
    realized_increment: np.ndarray
    no_signal: np.ndarray

    def __len__(self) -> int:
        return self.predicted_increment.size


def forecast_method(alpha: float) -> ForecastMethod:
    return ForecastMethod.conditional_expectation if alpha > 1.0 else ForecastMethod.semimetric_projection


def _checked_triangle(coeffs: DecompositionCoeffs, size: int, tol: float) -> np.ndarray:
    triangle = coeffs.a[:size, :size]
    diagonal = np.diag(triangle)
    if np.any(~np.isfinite(triangle[np.tril_indices(size)])) or np.any(diagonal <= tol):
        raise IllConditionedError(
            f"decomposition diagonal {diagonal.tolist()} has entries at or below {tol}",
            {"alpha": coeffs.alpha, "hurst": coeffs.hurst, "d": coeffs.d},
        )
    return triangle


def extract_innovations(obs, coeffs: DecompositionCoeffs, tol: float = DEFAULT_TOL) -> InnovationVector:
    """Z with sum_{j<=i} a_{1,i,j} Z_j = obs[i] for i = 0..d-2, by forward substitution."""
    obs = np.asarray(obs, dtype=float)
    if obs.ndim != 1 or obs.size != coeffs.d - 1:
        raise ParameterError(f"expected {coeffs.d - 1} observations for d={coeffs.d}, got shape {obs.shape}")
    if obs.size == 0:
        return InnovationVector(np.empty(0))
    triangle = _checked_triangle(coeffs, obs.size, tol)
    return InnovationVector(solve_triangular(triangle, obs, lower=True))


def _is_no_signal(increment, reference) -> np.ndarray:
    return np.abs(increment) <= NO_SIGNAL_RTOL * reference


def predict_next(obs: TimeSeries, params: LfsmParams, d: int, tol: float = DEFAULT_TOL) -> ForecastResult:
    """
    Forecast the observation following obs from its last d values, in the units of obs.

    Raises:
        ParameterError: d < 2 or fewer than d values
        DecompositionError: no decomposition at (alpha, H, 1, d)
    """
    if d < 2:
        raise ParameterError(f"forecast dimension must be at least 2, got {d}")
    if len(obs) < d:
        raise ParameterError(f"forecast with d={d} needs {d} values (anchor plus {d - 1}), got {len(obs)}")

    values = obs.values[-d:]
    anchor = values[0]
    coeffs, _ = solve_coefficients(params.alpha, params.hurst, 1.0, d, tol)
    innovations = extract_innovations((values[1:] - anchor) / params.sigma, coeffs, tol)

    if coeffs.direction == 0:
        # H = 1/alpha: the projection is the last observation
        predicted = float(values[-1])
    else:
        predicted = anchor + params.sigma * float(coeffs.a[d - 1, : d - 1] @ innovations.z)
    increment = predicted - values[-1]
    return ForecastResult(
        predicted=predicted,
        predicted_increment=increment,
        innovations=innovations,
        residual_scale=abs(coeffs.a[d - 1, d - 1]) * params.sigma,
        method=forecast_method(params.alpha),
        no_signal=bool(_is_no_signal(increment, np.max(np.abs(values - anchor)))),
    )


def forecast_path(values, params: LfsmParams, d: int, tol: float = DEFAULT_TOL) -> ForecastBatch:
    """
    Every one-step forecast a path of length n supports: n - d forecasts, each paired with the realized
    next increment. All windows share one coefficient solve and one batched triangular solve.
    """
    values = np.asarray(values, dtype=float)
    if d < 2:
        raise ParameterError(f"forecast dimension must be at least 2, got {d}")
    if values.size < d + 1:
        raise ParameterError(f"a path of length {values.size} supports no forecast with d={d}")

    coeffs, _ = solve_coefficients(params.alpha, params.hurst, 1.0, d, tol)
    triangle = _checked_triangle(coeffs, d - 1, tol)

    windows = sliding_window_view(values, d + 1)
    anchor = windows[:, :1]
    normalised = (windows[:, 1:d] - anchor) / params.sigma
    z = solve_triangular(triangle, normalised.T, lower=True)
    last = windows[:, d - 1]
    if coeffs.direction == 0:
        predicted = last.copy()
    else:
        predicted = anchor[:, 0] + params.sigma * (coeffs.a[d - 1, : d - 1] @ z)

    increment = predicted - last
    reference = np.max(np.abs(windows[:, :d] - anchor), axis=1)
    return ForecastBatch(increment, windows[:, d] - last, _is_no_signal(increment, reference))
