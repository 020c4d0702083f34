"""
Codifference-matched triangular decomposition of an LFSM

Finds a_{t,i,j} > 0 (0 <= j <= i < d) such that TX_{t+i} = sum_j a_{t,i,j} Z_j, with Z_j iid unit SaS,
has the same codifferences as X_{t+i}:

    (E_{i,i})   sum_{j<=i} |a_{i,j}|^alpha = K^alpha (t+i)^{alpha H}
    (E_{i',i})  f(a_{i',i}) = K^alpha ((t+i')^{alpha H} - (i'-i)^{alpha H})
                              - sum_{j<i} (|a_{i',j}|^alpha - |a_{i',j} - a_{i,j}|^alpha)
                f(z) = |z|^alpha - |z - a_{i,i}|^alpha

Equations are solved in lexicographic order of (i', i); each row needs only rows above it.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
import polars as pl
from scipy.optimize import brentq, newton

from lfsm.core.model import kernel_alpha_power
from lfsm.core.stable import validate_alpha
from lfsm_common.constants import COEFF_CACHE_SIZE, DEFAULT_TOL, HURST_INDEPENDENT_SNAP, MAX_NEWTON_ITER, NEWTON_START_OFFSET
from lfsm_common.exceptions import DecompositionError, LfsmError, NoSolutionError, ParameterError
from lfsm_common.log_kit import logger


@dataclass(frozen=True, eq=False)
class DecompositionCoeffs:
    """Lower-triangular coefficients a[i, j] = a_{t,i,j}; entries above the diagonal are 0."""

    t: float
    d: int
    a: np.ndarray
    alpha: float
    hurst: float

    @property
    def kernel_alpha(self) -> float:
        return kernel_alpha_power(self.alpha, self.hurst)

    @property
    def direction(self) -> int:
        return _direction(self.alpha, self.hurst)


@dataclass(frozen=True, eq=False)
class SolveReport:
    """
    Per-equation diagnostics of a solve.

    converged[i', i] and iterations[i', i] refer to equation (E_{i',i}); unsolved equations
    keep converged False. frontier_violation names the first constraint that failed.
    """

    converged: np.ndarray
    iterations: np.ndarray
    max_residual: float = 0.0
    frontier_violation: Optional[str] = None
    failed_equation: Optional[tuple[int, int]] = None
    fallbacks: int = 0

    @property
    def ok(self) -> bool:
        return self.frontier_violation is None and bool(np.all(self.converged[np.tril_indices_from(self.converged)]))

    def to_record(self) -> dict:
        return {
            "ok": self.ok,
            "max_residual": self.max_residual,
            "frontier_violation": self.frontier_violation,
            "failed_equation": list(self.failed_equation) if self.failed_equation else None,
            "newton_iterations": int(self.iterations.sum()),
            "bisection_fallbacks": self.fallbacks,
        }


def _direction(alpha: float, hurst: float) -> int:
    memory = hurst - 1.0 / alpha
    if abs(memory) < HURST_INDEPENDENT_SNAP:
        return 0
    return 1 if memory > 0 else -1


def _validate(alpha: float, hurst: float, t: float, d: int, tol: float):
    validate_alpha(alpha)
    if not 0.0 < hurst < 1.0:
        raise ParameterError(f"hurst must lie in (0, 1), got {hurst}")
    if not t > 0:
        raise ParameterError(f"base time t must be positive, got {t}")
    if int(d) != d or d < 1:
        raise ParameterError(f"dimension d must be a positive integer, got {d}")
    if not tol > 0:
        raise ParameterError(f"tolerance must be positive, got {tol}")


# ====================================================================================================
# ** Off-diagonal equation **
# f is strictly increasing on (a, inf) when alpha > 1 (persistent case) and on (0, a) for every
# alpha (antipersistent case), with ranges (a^alpha, inf) and (-a^alpha, a^alpha).
# ====================================================================================================
def _f(z: float, a_ii: float, alpha: float) -> float:
    return abs(z) ** alpha - abs(z - a_ii) ** alpha


def _fprime(z: float, a_ii: float, alpha: float) -> float:
    return alpha * (math.copysign(abs(z) ** (alpha - 1.0), z) - math.copysign(abs(z - a_ii) ** (alpha - 1.0), z - a_ii))


def _offdiag_root(
    target: float,
    a_ii: float,
    alpha: float,
    direction: int,
    tol: float,
    start: Optional[float] = None,
    max_iter: int = MAX_NEWTON_ITER,
) -> tuple[float, int, bool]:
    """Returns (root, Newton iterations, whether the bisection fallback was used)."""
    if alpha == 2.0:
        return (target + a_ii * a_ii) / (2.0 * a_ii), 0, False

    floor = a_ii**alpha
    if direction > 0:
        if alpha <= 1.0:
            raise ParameterError(f"persistent decomposition needs alpha > 1, got {alpha}")
        if target <= floor:
            raise NoSolutionError(f"target {target:.6g} is below the range (a^alpha = {floor:.6g}, inf) of f")
        lo, hi = a_ii, math.inf
    elif direction < 0:
        if not -floor < target < floor:
            raise NoSolutionError(f"target {target:.6g} is outside the range (+-{floor:.6g}) of f")
        lo, hi = 0.0, a_ii
    else:
        raise ParameterError("off-diagonal equations are closed-form when H = 1/alpha")

    def in_domain(z):
        return lo < z < hi

    def accurate(z):
        return abs(_f(z, a_ii, alpha) - target) <= tol * max(1.0, abs(target))

    x0 = (start if start is not None else a_ii) * (1.0 + direction * NEWTON_START_OFFSET)
    iterations = 0
    try:
        root, info = newton(
            lambda z: _f(z, a_ii, alpha) - target,
            x0,
            fprime=lambda z: _fprime(z, a_ii, alpha),
            tol=1e-14 * max(1.0, a_ii, abs(x0)),
            maxiter=max_iter,
            full_output=True,
            disp=False,
        )
        iterations = int(info.iterations)
        if info.converged and in_domain(root) and accurate(root):
            return float(root), iterations, False
    except (ArithmeticError, ValueError):
        pass

    # Newton left the domain or stalled: bisection on the bracket where f is monotone
    if direction > 0:
        hi = 2.0 * a_ii
        while _f(hi, a_ii, alpha) <= target:
            hi *= 2.0
            if not math.isfinite(hi):
                raise NoSolutionError(f"no bracket found for target {target:.6g}")
    root = brentq(lambda z: _f(z, a_ii, alpha) - target, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    return float(root), iterations, True


def newton_solve_offdiag(
    target: float,
    a_ii: float,
    alpha: float,
    direction: int,
    tol: float = DEFAULT_TOL,
    start: Optional[float] = None,
) -> float:
    """
    Solve |z|^alpha - |z - a_ii|^alpha = target on (a_ii, inf) for direction +1 or on (0, a_ii)
    for direction -1. Newton-Raphson starts slightly past `start` (default a_ii) in the search
    direction and falls back to Brent's method on the bracket.

    Raises:
        NoSolutionError: target outside the range of f on the domain
        DecompositionError: residual above tol after both methods
    """
    if not a_ii > 0:
        raise ParameterError(f"diagonal coefficient must be positive, got {a_ii}")
    z, _, _ = _offdiag_root(target, a_ii, alpha, direction, tol, start)
    residual = abs(_f(z, a_ii, alpha) - target)
    if residual > tol * max(1.0, abs(target)):
        raise DecompositionError(f"off-diagonal solve did not reach tolerance (residual {residual:.3g})")
    return z


# ====================================================================================================
# ** Cascade solve **
# ====================================================================================================
def _closed_form_independent(t: float, d: int, alpha: float) -> np.ndarray:
    a = np.tril(np.ones((d, d)))
    a[:, 0] = t ** (1.0 / alpha)
    return a


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@lru_cache(maxsize=COEFF_CACHE_SIZE)
def try_solve_coefficients(
    alpha: float, hurst: float, t: float = 1.0, d: int = 2, tol: float = DEFAULT_TOL
) -> tuple[DecompositionCoeffs, SolveReport]:
    """
    Cascade solve without raising on constraint failures; the report says whether it succeeded.

    Coefficients of a failed solve are NaN from the failing equation on. Results are cached per
    (alpha, H, t, d, tol) and their arrays are read-only.
    """
    _validate(alpha, hurst, t, d, tol)
    d = int(d)
    converged = np.zeros((d, d), dtype=bool)
    iterations = np.zeros((d, d), dtype=int)
    direction = _direction(alpha, hurst)

    if direction == 0:
        converged[np.tril_indices(d)] = True
        coeffs = DecompositionCoeffs(t, d, _freeze(_closed_form_independent(t, d, alpha)), alpha, hurst)
        return coeffs, SolveReport(converged, iterations)

    ka = kernel_alpha_power(alpha, hurst)
    a_h = alpha * hurst
    a = np.full((d, d), np.nan)
    a[np.triu_indices(d, 1)] = 0.0
    fallbacks = 0
    max_residual = 0.0

    def fail(reason: str, eq: tuple[int, int]):
        logger.debug(f"Decomposition alpha={alpha}, H={hurst}, t={t}, d={d} stops at E{eq}: {reason}")
        report = SolveReport(converged, iterations, max_residual, reason, eq, fallbacks)
        return DecompositionCoeffs(t, d, _freeze(a), alpha, hurst), report

    for row in range(d):
        for col in range(row):
            target = ka * ((t + row) ** a_h - (row - col) ** a_h)
            if col:
                prev_row, this_row = a[row, :col], a[col, :col]
                target -= np.sum(np.abs(prev_row) ** alpha - np.abs(prev_row - this_row) ** alpha)
            a_ii = a[col, col]
            try:
                z, n_iter, used_fallback = _offdiag_root(target, a_ii, alpha, direction, tol, start=a[row - 1, col])
            except NoSolutionError as e:
                return fail(str(e), (row, col))
            iterations[row, col] = n_iter
            fallbacks += used_fallback
            residual = abs(_f(z, a_ii, alpha) - target)
            max_residual = max(max_residual, residual)
            if residual > tol * max(1.0, abs(target)):
                return fail(f"residual {residual:.3g} above tolerance", (row, col))
            a[row, col] = z
            converged[row, col] = True
            if not z > 0:
                return fail(f"a[{row},{col}] = {z:.6g} is not positive", (row, col))
            if not direction * (z - a[row - 1, col]) > 0:
                order = ">" if direction > 0 else "<"
                return fail(f"a[{row},{col}] {order} a[{row - 1},{col}] does not hold", (row, col))

        rhs = ka * (t + row) ** a_h - np.sum(np.abs(a[row, :row]) ** alpha)
        if not rhs > 0:
            return fail(f"diagonal right-hand side {rhs:.6g} is not positive", (row, row))
        a[row, row] = rhs ** (1.0 / alpha)
        converged[row, row] = True

    return DecompositionCoeffs(t, d, _freeze(a), alpha, hurst), SolveReport(
        converged, iterations, max_residual, None, None, fallbacks
    )


def solve_coefficients(
    alpha: float, hurst: float, t: float = 1.0, d: int = 2, tol: float = DEFAULT_TOL
) -> tuple[DecompositionCoeffs, SolveReport]:
    """
    Codifference-matched decomposition coefficients at base time t and dimension d.

    H within HURST_INDEPENDENT_SNAP of 1/alpha returns a_{t,i,j} = t^{(1/alpha)[j=0]} for i >= j,
    alpha = 2 solves each off-diagonal equation in closed form (the result is the Cholesky factor
    of half the covariance matrix), every other pair goes through Newton-Raphson.

    Raises:
        DecompositionError: with the SolveReport attached when any constraint fails
    """
    coeffs, report = try_solve_coefficients(float(alpha), float(hurst), float(t), int(d), float(tol))
    if not report.ok:
        raise DecompositionError(
            f"no valid decomposition for alpha={alpha}, H={hurst}, t={t}, d={d}: {report.frontier_violation}",
            report,
        )
    return coeffs, report


def system_residuals(coeffs: DecompositionCoeffs) -> np.ndarray:
    """
    Residuals of the codifference system in norm form.

    Diagonal entries: sum_j |a_{i,j}|^alpha - K^alpha (t+i)^{alpha H}.
    Entry (i', i), i' > i: sum_j |a_{i',j} - a_{i,j}|^alpha - K^alpha (i'-i)^{alpha H}.
    """
    a, alpha, t, d = coeffs.a, coeffs.alpha, coeffs.t, coeffs.d
    ka, a_h = coeffs.kernel_alpha, alpha * coeffs.hurst
    residuals = np.zeros((d, d))
    for row in range(d):
        residuals[row, row] = np.sum(np.abs(a[row, : row + 1]) ** alpha) - ka * (t + row) ** a_h
        for col in range(row):
            residuals[row, col] = np.sum(np.abs(a[row] - a[col]) ** alpha) - ka * (row - col) ** a_h
    return residuals


def coefficient_table(coeffs: DecompositionCoeffs) -> pl.DataFrame:
    """Long-form (i, j, a) table of the lower triangle."""
    rows, cols = np.tril_indices(coeffs.d)
    return pl.DataFrame(
        {
            "alpha": np.full(rows.size, coeffs.alpha),
            "hurst": np.full(rows.size, coeffs.hurst),
            "t": np.full(rows.size, float(coeffs.t)),
            "i": rows.astype(np.int64),
            "j": cols.astype(np.int64),
            "a": coeffs.a[rows, cols],
        }
    )


def solve_or_none(alpha: float, hurst: float, t: float, d: int, tol: float = DEFAULT_TOL) -> Optional[DecompositionCoeffs]:
    """Coefficients, or None when the decomposition does not exist or the kernel quadrature fails."""
    try:
        coeffs, report = try_solve_coefficients(float(alpha), float(hurst), float(t), int(d), float(tol))
    except LfsmError as e:
        logger.debug(f"Decomposition alpha={alpha}, H={hurst}, d={d} failed: {e}")
        return None
    return coeffs if report.ok else None
