"""
Symmetric alpha-stable (SaS) primitives.

All laws here have skewness 0 and location 0; `scale` is gamma in
Phi(theta) = exp(-gamma^alpha |theta|^alpha). A unit-scale SaS variable with
alpha = 2 is Normal(0, 2).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from lfsm.core.rng import RngState
from lfsm_common.constants import ALPHA_CAUCHY_SNAP
from lfsm_common.exceptions import ParameterError


def validate_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 2.0:
        raise ParameterError(f"alpha must lie in (0, 2], got {alpha}")


@dataclass(frozen=True, slots=True)
class StableScale:
    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        validate_alpha(self.alpha)
        if not self.scale >= 0.0:
            raise ParameterError(f"scale must be non-negative, got {self.scale}")


def sas_char_fn(theta, s: StableScale):
    """Characteristic function exp(-scale^alpha |theta|^alpha); accepts scalars or arrays."""
    theta = np.asarray(theta, dtype=float)
    value = np.exp(-((s.scale * np.abs(theta)) ** s.alpha))
    return float(value) if value.ndim == 0 else value


def sample_sas(s: StableScale, n: int, rng: RngState) -> np.ndarray:
    """
    Draw n independent SaS variables with the Chambers-Mallows-Stuck method.

    alpha within ALPHA_CAUCHY_SNAP of 1 is sampled through the Cauchy inverse CDF.
    """
    if n < 0:
        raise ParameterError(f"sample count must be non-negative, got {n}")
    gen = rng.generator()
    alpha = s.alpha

    if abs(alpha - 1.0) < ALPHA_CAUCHY_SNAP:
        u = gen.uniform(0.0, 1.0, n)
        return s.scale * np.tan(np.pi * (u - 0.5))

    p = gen.uniform(-np.pi / 2, np.pi / 2, n)
    q = gen.standard_exponential(n)
    r = np.sin(alpha * p) / np.cos(p) ** (1.0 / alpha) * (np.cos(p * (1.0 - alpha)) / q) ** ((1.0 - alpha) / alpha)
    return s.scale * r


def abs_moment(alpha: float, p: float) -> float:
    """
    p-th absolute moment E|X|^p of a unit-scale SaS variable.

    For alpha < 2 the moment exists for p in (-1, alpha). The Gaussian case
    alpha = 2 has every moment p > -1: E|X|^p = 2^p Gamma((p+1)/2) / sqrt(pi).
    """
    validate_alpha(alpha)
    if p <= -1.0:
        raise ParameterError(f"absolute moment of order {p} is undefined (p must exceed -1)")
    if alpha == 2.0:
        return float(2.0**p * gamma_fn((p + 1.0) / 2.0) / math.sqrt(math.pi))
    if p >= alpha:
        raise ParameterError(f"absolute moment of order {p} is infinite for alpha={alpha}")
    if p == 0.0:
        return 1.0
    if abs(p - 1.0) < 1e-9:
        # Gamma(1-p) cos(p pi/2) -> pi/2
        return float(2.0 * gamma_fn(1.0 - 1.0 / alpha) / math.pi)
    return float(gamma_fn(1.0 - p / alpha) / (gamma_fn(1.0 - p) * math.cos(p * math.pi / 2.0)))
