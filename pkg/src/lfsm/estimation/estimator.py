"""
LFSM parameter estimation from the real part of the empirical characteristic function

For SaS increments Y of an LFSM at lag tau, -ln Phi_Y(theta) = (sigma K)^alpha tau^{alpha H} |theta|^alpha, so
- regressing ln(-ln Phi(theta)) on ln theta at a fixed lag gives the slope S1 = alpha
- regressing ln(-ln Phi(1)) on ln tau gives the slope S2 = alpha H
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import polars as pl
from scipy.special import gamma as gamma_fn
from scipy.stats import linregress

from lfsm.core.model import LfsmParams, SimConfig, TimeSeries, simulate_lfsm
from lfsm.core.rng import RngState
from lfsm_common.constants import (
    ALPHA_HAT_FLOOR,
    CHAR_FN_CEILING,
    CHAR_FN_EPS,
    DEFAULT_TAU_MULTIPLES,
    DEFAULT_THETA_GRID,
    HURST_CHAR_FN_CEILING,
    HURST_HAT_BOUNDS,
    PROVISIONAL_ALPHA_GRID,
    PROVISIONAL_THETA,
)
from lfsm_common.enums import DependenceRegime
from lfsm_common.exceptions import EstimationError, LfsmError, ParameterError
from lfsm_common.log_kit import logger
from lfsm_common.parallel import run_parallel


@dataclass(frozen=True, slots=True)
class EstimationConfig:
    """
    tau0 and tau_grid are lags in time units and must be multiples of the series dt.
    An empty tau_grid means the geometric default {tau0, 2 tau0, 4 tau0, 8 tau0, 16 tau0}.
    """

    tau0: float
    theta_grid: tuple[float, ...] = DEFAULT_THETA_GRID
    tau_grid: tuple[float, ...] = ()
    char_fn_ceiling: float = CHAR_FN_CEILING
    hurst_char_fn_ceiling: float = HURST_CHAR_FN_CEILING

    def __post_init__(self):
        if not self.tau0 > 0:
            raise ParameterError(f"tau0 must be positive, got {self.tau0}")
        object.__setattr__(self, "theta_grid", tuple(float(x) for x in self.theta_grid))
        tau_grid = self.tau_grid or tuple(m * self.tau0 for m in DEFAULT_TAU_MULTIPLES)
        object.__setattr__(self, "tau_grid", tuple(float(x) for x in tau_grid))
        if len(self.theta_grid) < 2 or min(self.theta_grid) <= 0:
            raise ParameterError(f"theta grid needs at least 2 positive values, got {self.theta_grid}")
        if len(self.tau_grid) < 2 or min(self.tau_grid) <= 0:
            raise ParameterError(f"tau grid needs at least 2 positive lags, got {self.tau_grid}")
        if not (self.char_fn_ceiling > 0 and self.hurst_char_fn_ceiling > 0):
            raise ParameterError(
                f"characteristic-function ceilings must be positive, got {self.char_fn_ceiling}, {self.hurst_char_fn_ceiling}"
            )


@dataclass(frozen=True, slots=True)
class RegressionFit:
    slope: float
    intercept: float
    points_used: int
    rvalue: float = float("nan")

    def __post_init__(self):
        if self.points_used < 2:
            raise ParameterError(f"a regression needs at least 2 points, got {self.points_used}")


@dataclass(frozen=True, slots=True)
class EstimationResult:
    alpha_hat: float
    h_hat: float
    sigma_hat: float
    alpha_fit: RegressionFit
    h_fit: RegressionFit

    @property
    def memory(self) -> float:
        return self.h_hat - 1.0 / self.alpha_hat

    @property
    def regime(self) -> DependenceRegime:
        return self.to_params().regime

    def to_params(self) -> LfsmParams:
        return LfsmParams(self.alpha_hat, self.h_hat, self.sigma_hat)

    def to_record(self) -> dict:
        return {
            "alpha_hat": self.alpha_hat,
            "h_hat": self.h_hat,
            "sigma_hat": self.sigma_hat,
            "memory": self.memory,
            "alpha_points": self.alpha_fit.points_used,
            "h_points": self.h_fit.points_used,
        }


def empirical_char_fn(samples, theta):
    """(1/n) sum cos(theta Y_i); theta may be a scalar or an array."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise ParameterError("empirical characteristic function of an empty sample")
    theta = np.asarray(theta, dtype=float)
    value = np.cos(np.multiply.outer(theta, samples)).mean(axis=-1)
    return float(value) if value.ndim == 0 else value


def _mean_abs_to_scale(mean_abs: float, alpha: float) -> float:
    # E|X| = 2 Gamma(1 - 1/alpha) / pi for a unit-scale SaS variable with alpha > 1
    return math.pi / (2.0 * gamma_fn(1.0 - 1.0 / alpha)) * mean_abs


def _checked_increments(series: TimeSeries, lag: float) -> np.ndarray:
    increments = series.increments(series.lag_steps(lag))
    if increments.size == 0:
        raise EstimationError(f"series of length {len(series)} has no increments at lag {lag}")
    if np.ptp(increments) == 0.0 and increments[0] == 0.0:
        raise EstimationError(f"series is constant at lag {lag}", {"lag": lag})
    return increments


def provisional_fit(increments: np.ndarray) -> tuple[float, float]:
    """
    Coarse (alpha, sigma) used to normalise increments before the regressions.

    For each alpha of PROVISIONAL_ALPHA_GRID the scale follows from the mean absolute
    increment; the pair whose characteristic function best matches the empirical one on
    PROVISIONAL_THETA wins.
    """
    mean_abs = float(np.mean(np.abs(increments)))
    u = np.asarray(PROVISIONAL_THETA)
    best = (math.inf, PROVISIONAL_ALPHA_GRID[-1], mean_abs)
    for alpha in PROVISIONAL_ALPHA_GRID:
        scale = _mean_abs_to_scale(mean_abs, alpha)
        loss = float(np.sum((empirical_char_fn(increments / scale, u) - np.exp(-(u**alpha))) ** 2))
        if loss < best[0]:
            best = (loss, alpha, scale)
    return best[1], best[2]


def _log_log_fit(x: np.ndarray, phi: np.ndarray, what: str) -> RegressionFit:
    usable = (phi > CHAR_FN_EPS) & (phi < 1.0 - CHAR_FN_EPS)
    if usable.sum() < 2:
        raise EstimationError(
            f"fewer than 2 usable points for the {what} regression",
            {"grid": x.tolist(), "phi": phi.tolist()},
        )
    if not usable.all():
        logger.debug(f"{what} regression drops grid points {x[~usable].tolist()} (phi out of (0, 1))")
    fit = linregress(np.log(x[usable]), np.log(-np.log(phi[usable])))
    return RegressionFit(float(fit.slope), float(fit.intercept), int(usable.sum()), float(fit.rvalue))


def _check_length(series: TimeSeries, cfg: EstimationConfig):
    max_steps = max(series.lag_steps(tau) for tau in cfg.tau_grid)
    if len(series) < 2 * max_steps:
        raise EstimationError(
            f"series of length {len(series)} is too short for lags up to {max(cfg.tau_grid)} "
            f"(needs at least {2 * max_steps} values)",
            {"length": len(series), "required": 2 * max_steps},
        )


def estimate_alpha(series: TimeSeries, cfg: EstimationConfig) -> RegressionFit:
    """
    Slope S1 of ln(-ln Phi(theta)) against ln theta for increments at lag tau0.

    The slope is the alpha estimate and is returned clamped to [ALPHA_HAT_FLOOR, 2]; a non-positive
    raw slope is an estimation failure.

    Increments are normalised by a provisional scale and then stretched so that
    -ln Phi at the largest theta sits near cfg.char_fn_ceiling. Both rescalings shift
    ln theta by a constant and leave the slope unchanged.
    """
    increments = _checked_increments(series, cfg.tau0)
    alpha0, scale0 = provisional_fit(increments)
    theta = np.asarray(cfg.theta_grid)
    stretch = cfg.char_fn_ceiling ** (1.0 / alpha0) / theta.max()
    phi = empirical_char_fn(increments * (stretch / scale0), theta)
    fit = _log_log_fit(theta, np.atleast_1d(phi), "alpha")
    if not fit.slope > 0:
        raise EstimationError(f"alpha slope {fit.slope} is not positive", {"slope": fit.slope})
    if fit.slope > 2.0:
        logger.debug(f"alpha slope {fit.slope:.4f} clamped to 2")
    return replace(fit, slope=float(np.clip(fit.slope, ALPHA_HAT_FLOOR, 2.0)))


def estimate_h(series: TimeSeries, cfg: EstimationConfig, alpha_fit: RegressionFit) -> tuple[RegressionFit, float]:
    """Slope S2 of ln(-ln Phi_tau(1)) against ln tau; returns the fit and H = S2 / S1."""
    _check_length(series, cfg)
    if not alpha_fit.slope > 0:
        raise EstimationError(f"alpha slope {alpha_fit.slope} is not positive; H is undefined")

    taus = np.asarray(cfg.tau_grid)
    longest = _checked_increments(series, taus.max())
    alpha0, scale_max = provisional_fit(longest)
    stretch = cfg.hurst_char_fn_ceiling ** (1.0 / alpha0) / scale_max
    phi = np.array([empirical_char_fn(series.increments(series.lag_steps(tau)) * stretch, 1.0) for tau in taus])

    fit = _log_log_fit(taus, phi, "hurst")
    h_hat = float(np.clip(fit.slope / alpha_fit.slope, *HURST_HAT_BOUNDS))
    return fit, h_hat


def estimate_sigma(series: TimeSeries, tau0: float, alpha_hat: float) -> float:
    """sigma = pi / (2 Gamma(1 - 1/alpha)) * mean |X_{t+tau0} - X_t|, defined for alpha > 1 only."""
    if not alpha_hat > 1.0:
        raise EstimationError(
            f"sigma estimate needs alpha > 1 (finite first moment), got {alpha_hat}", {"alpha_hat": alpha_hat}
        )
    increments = series.increments(series.lag_steps(tau0))
    return float(_mean_abs_to_scale(float(np.mean(np.abs(increments))), alpha_hat))


def estimate_lfsm(series: TimeSeries, cfg: EstimationConfig) -> EstimationResult:
    _check_length(series, cfg)
    alpha_fit = estimate_alpha(series, cfg)
    h_fit, h_hat = estimate_h(series, cfg, alpha_fit)
    sigma_hat = estimate_sigma(series, cfg.tau0, alpha_fit.slope)
    return EstimationResult(alpha_fit.slope, h_hat, sigma_hat, alpha_fit, h_fit)


# ====================================================================================================
# ** Estimator study **
# Distribution of the estimates over simulated trajectories, one parallel task per (alpha, H) cell
# ====================================================================================================
def _estimate_cell(payload: tuple) -> list[dict]:
    params, sim, cfg, rng, n_paths = payload
    rows = []
    for i in range(n_paths):
        path = simulate_lfsm(params, sim, rng.child(i))
        try:
            est = estimate_lfsm(path, cfg)
        except LfsmError:
            continue
        rows.append({"path": i, "alpha_hat": est.alpha_hat, "h_hat": est.h_hat, "sigma_hat": est.sigma_hat})
    return rows


def estimator_study(
    param_grid: list[LfsmParams],
    n_paths: int,
    sim: SimConfig,
    cfg: EstimationConfig,
    rng: RngState,
    jobs: Optional[int] = None,
    show_progress: bool = True,
) -> pl.DataFrame:
    """
    Mean and quartiles of alpha_hat and h_hat for each parameter pair.

    Cell k simulates its paths from rng.child(k), so the table only depends on the
    inputs and not on the worker count.
    """
    if n_paths < 1:
        raise ParameterError(f"n_paths must be positive, got {n_paths}")
    tasks = [(k, (p, sim, cfg, rng.child(k), n_paths)) for k, p in enumerate(param_grid)]
    results = run_parallel(_estimate_cell, tasks, "Estimator study", jobs, show_progress)

    rows = []
    for k, params in enumerate(param_grid):
        cell = results[k]
        row = {"alpha": params.alpha, "hurst": params.hurst, "n_paths": n_paths, "n_ok": len(cell)}
        for col in ("alpha_hat", "h_hat"):
            values = np.array([r[col] for r in cell]) if cell else np.array([np.nan])
            q1, median, q3 = (float(q) for q in np.quantile(values, [0.25, 0.5, 0.75]))
            row |= {f"{col}_mean": float(values.mean()), f"{col}_q1": q1, f"{col}_median": median, f"{col}_q3": q3}
        rows.append(row)
    return pl.DataFrame(rows)
