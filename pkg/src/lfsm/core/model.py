"""
LFSM model quantities: the kernel constant K_{alpha,H}, the theoretical
autocodifference, and Riemann-sum simulation of paths.

X_t = int [ (t-s)_+^{H-1/alpha} - (-s)_+^{H-1/alpha} ] dL_alpha(s)
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import polars as pl
from scipy.integrate import IntegrationWarning, quad
from scipy.signal import fftconvolve

from lfsm.core.rng import RngState
from lfsm.core.stable import StableScale, sample_sas, validate_alpha
from lfsm_common.constants import DEFAULT_HORIZON, DEFAULT_SIM_DT, DEFAULT_TRUNCATION, HURST_INDEPENDENT_SNAP
from lfsm_common.enums import DependenceRegime
from lfsm_common.exceptions import ParameterError, QuadratureError


@dataclass(frozen=True, slots=True)
class LfsmParams:
    alpha: float
    hurst: float
    sigma: float = 1.0

    def __post_init__(self):
        validate_alpha(self.alpha)
        if not 0.0 < self.hurst < 1.0:
            raise ParameterError(f"hurst must lie in (0, 1), got {self.hurst}")
        if not self.sigma > 0.0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")

    @property
    def memory(self) -> float:
        """H - 1/alpha: positive for persistent, negative for antipersistent increments."""
        return self.hurst - 1.0 / self.alpha

    @property
    def is_independent(self) -> bool:
        return abs(self.memory) < HURST_INDEPENDENT_SNAP

    @property
    def regime(self) -> DependenceRegime:
        if self.is_independent:
            return DependenceRegime.independent
        return DependenceRegime.persistent if self.memory > 0 else DependenceRegime.antipersistent


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Uniformly sampled observations values[k] at time t0 + k * dt."""

    values: np.ndarray
    dt: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ParameterError(f"a time series needs at least 2 values, got shape {values.shape}")
        if not self.dt > 0.0:
            raise ParameterError(f"time step must be positive, got {self.dt}")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    def lag_steps(self, lag: float) -> int:
        """Number of grid steps in a lag expressed in time units."""
        steps = int(round(lag / self.dt))
        if steps < 1 or not math.isclose(steps * self.dt, lag, rel_tol=1e-6):
            raise ParameterError(f"lag {lag} is not a positive multiple of the time step {self.dt}")
        return steps

    def increments(self, lag_steps: int = 1) -> np.ndarray:
        """Overlapping increments X_{k+lag} - X_k."""
        return self.values[lag_steps:] - self.values[:-lag_steps]

    def window(self, start: int, stop: int) -> "TimeSeries":
        return TimeSeries(self.values[start:stop], self.dt, self.t0 + start * self.dt)

    def scaled(self, factor: float) -> "TimeSeries":
        return TimeSeries(self.values * factor, self.dt, self.t0)

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame({"time": self.times, "value": self.values})


@dataclass(frozen=True, slots=True)
class SimConfig:
    dt: float = DEFAULT_SIM_DT
    horizon: float = DEFAULT_HORIZON
    truncation: float = DEFAULT_TRUNCATION

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ParameterError(f"simulation dt must be positive, got {self.dt}")
        if not self.horizon > 0.0:
            raise ParameterError(f"simulation horizon must be positive, got {self.horizon}")
        if not self.truncation >= 0.0:
            raise ParameterError(f"truncation must be non-negative, got {self.truncation}")

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))

    @property
    def n_past(self) -> int:
        return int(round(self.truncation / self.dt))


# ====================================================================================================
# ** Kernel constant **
# K^alpha = int_0^1 (1-s)^{alpha d} ds + int_0^inf |(1+u)^d - u^d|^alpha du,   d = H - 1/alpha
# The second integral is split at u = 1 (algebraic singularity at 0 when d < 0) and at
# u = TAIL_START, beyond which the two-term asymptotic expansion is integrated in closed form.
# ====================================================================================================
TAIL_START = 1e3
_QUAD_OPTS = dict(epsabs=1e-13, epsrel=1e-12, limit=400)


def _tail_integral(alpha: float, d: float, start: float) -> float:
    e = alpha * (d - 1.0)
    c = abs(d) ** alpha
    lead = start ** (e + 1.0) / -(e + 1.0)
    correction = 0.5 * alpha * (d - 1.0) * start**e / -e
    return c * (lead + correction)


@lru_cache(maxsize=1024)
def kernel_alpha_power(alpha: float, hurst: float) -> float:
    """K_{alpha,H}^alpha, cached per (alpha, H)."""
    d = hurst - 1.0 / alpha
    if abs(d) < HURST_INDEPENDENT_SNAP:
        return 1.0

    head = 1.0 / (alpha * d + 1.0)

    def integrand(u):
        return abs((1.0 + u) ** d - u**d) ** alpha

    pieces = []
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            if d < 0:
                # |(1+u)^d - u^d|^alpha = u^{alpha d} |(u/(1+u))^{-d} - 1|^alpha
                pieces.append(
                    quad(lambda u: abs((u / (1.0 + u)) ** (-d) - 1.0) ** alpha, 0.0, 1.0,
                         weight="alg", wvar=(alpha * d, 0.0), **_QUAD_OPTS)
                )
            else:
                pieces.append(quad(integrand, 0.0, 1.0, **_QUAD_OPTS))
            for lo, hi in ((1.0, 10.0), (10.0, 100.0), (100.0, TAIL_START)):
                pieces.append(quad(integrand, lo, hi, **_QUAD_OPTS))
        except IntegrationWarning as e:
            raise QuadratureError(f"kernel quadrature failed for alpha={alpha}, H={hurst}: {e}", float("nan"))

    value = head + sum(p[0] for p in pieces) + _tail_integral(alpha, d, TAIL_START)
    abserr = sum(p[1] for p in pieces)
    if not np.isfinite(value) or value <= 0 or abserr > 1e-9 * max(1.0, value):
        raise QuadratureError(f"kernel quadrature did not converge for alpha={alpha}, H={hurst}", abserr)
    return value


def kernel_constant(params: LfsmParams) -> float:
    """K_{alpha,H}, the L^alpha norm of the LFSM kernel; equals 1 when H = 1/alpha."""
    return kernel_alpha_power(params.alpha, params.hurst) ** (1.0 / params.alpha)


def lfsm_codifference(params: LfsmParams, s: float, t: float) -> float:
    """CD(X_t, X_s) = sigma^alpha K^alpha (|t|^{aH} + |s|^{aH} - |t-s|^{aH})."""
    a_h = params.alpha * params.hurst
    k_alpha = kernel_alpha_power(params.alpha, params.hurst)
    return params.sigma**params.alpha * k_alpha * (abs(t) ** a_h + abs(s) ** a_h - abs(t - s) ** a_h)


def codifference_matrix(params: LfsmParams, times) -> np.ndarray:
    times = np.asarray(times, dtype=float)
    a_h = params.alpha * params.hurst
    k_alpha = kernel_alpha_power(params.alpha, params.hurst)
    tt, ss = np.meshgrid(times, times, indexing="ij")
    return params.sigma**params.alpha * k_alpha * (np.abs(tt) ** a_h + np.abs(ss) ** a_h - np.abs(tt - ss) ** a_h)


# ====================================================================================================
# ** Simulation **
# ====================================================================================================
def simulate_lfsm(params: LfsmParams, cfg: SimConfig, rng: RngState) -> TimeSeries:
    """
    Riemann-sum path on the grid 0, dt, ..., horizon with X(0) = 0.

    Each cell [s_k, s_k + dt) of the driving Levy motion, k = -n_past .. n_steps - 1,
    carries an independent SaS increment of scale dt^{1/alpha} and is weighted by the
    kernel evaluated at its left endpoint s_k.
    """
    n, m = cfg.n_steps, cfg.n_past
    noise = sample_sas(StableScale(params.alpha, cfg.dt ** (1.0 / params.alpha)), m + n, rng)

    if params.is_independent:
        path = np.concatenate(([0.0], np.cumsum(noise[m:])))
    else:
        d = params.hurst - 1.0 / params.alpha
        weights = np.zeros(m + n + 1)
        weights[1:] = (np.arange(1, m + n + 1) * cfg.dt) ** d
        # full[m + j] = sum_{k < j} weights[j - k] * noise_k, for grid index j = 0..n
        full = fftconvolve(noise, weights)[m : m + n + 1]
        path = full - full[0]

    return TimeSeries(params.sigma * path, cfg.dt, 0.0)


def simulate_batch(params: LfsmParams, cfg: SimConfig, rng: RngState, n_paths: int) -> list[TimeSeries]:
    """Independent trajectories; path i uses rng.child(i)."""
    return [simulate_lfsm(params, cfg, rng.child(i)) for i in range(n_paths)]
