#!/usr/bin/env python3
"""
Tests for the codifference-matched decomposition

- closed forms: H = 1/alpha and the Gaussian (Cholesky) case
- Newton-Raphson off-diagonal solves and their range checks
- residuals, ordering and positivity of solved systems
"""

import numpy as np
import pytest

from lfsm.core.model import LfsmParams, codifference_matrix, kernel_alpha_power, kernel_constant
from lfsm.decomposition.solver import (
    coefficient_table,
    newton_solve_offdiag,
    solve_coefficients,
    solve_or_none,
    system_residuals,
    try_solve_coefficients,
)
from lfsm_common.exceptions import DecompositionError, NoSolutionError, ParameterError
from lfsm_common.log_kit import divider, logger


def _closed_form(t: float, d: int, alpha: float) -> np.ndarray:
    expected = np.tril(np.ones((d, d)))
    expected[:, 0] = t ** (1.0 / alpha)
    return expected


def test_closed_form_independent_increments():
    divider("Closed form, H = 1/alpha", sep="-")
    coeffs, report = solve_coefficients(1.5, 2.0 / 3.0, 1.0, 4)
    np.testing.assert_array_equal(coeffs.a, np.tril(np.ones((4, 4))))
    assert report.ok and int(report.iterations.sum()) == 0

    coeffs, _ = solve_coefficients(2.0, 0.5, 1.0, 2)
    np.testing.assert_array_equal(coeffs.a, [[1.0, 0.0], [1.0, 1.0]])

    for alpha in (1.25, 1.5, 2.0):
        for t in (1.0, 3.0):
            coeffs, _ = solve_coefficients(alpha, 1.0 / alpha, t, 7)
            np.testing.assert_array_equal(coeffs.a, _closed_form(t, 7, alpha))
            assert coeffs.direction == 0
    logger.ok("Closed-form coefficients are exact")


def test_gaussian_case_is_cholesky():
    divider("alpha = 2 vs Cholesky factor", sep="-")
    for hurst in (0.2, 0.35, 0.5, 0.65, 0.8):
        params = LfsmParams(2.0, hurst)
        for d in range(2, 13):
            coeffs, report = solve_coefficients(2.0, hurst, 1.0, d)
            assert report.ok
            oracle = np.linalg.cholesky(codifference_matrix(params, 1.0 + np.arange(d)) / 2.0)
            np.testing.assert_allclose(coeffs.a, oracle, rtol=0.0, atol=1e-8)
        logger.debug(f"H={hurst}: d = 2..12 match")


def test_row_zero_anchor():
    for alpha, hurst, t in ((1.5, 0.8, 1.0), (1.5, 0.8, 3.0), (2.0, 0.3, 2.0)):
        coeffs, _ = solve_coefficients(alpha, hurst, t, 3)
        assert coeffs.a[0, 0] == pytest.approx(kernel_constant(LfsmParams(alpha, hurst)) * t**hurst, rel=1e-12)


def test_newton_offdiag():
    divider("Off-diagonal Newton solve", sep="-")
    # alpha = 2 bypass
    assert newton_solve_offdiag(3.0, 2.0, 2.0, 1) == pytest.approx((3.0 + 4.0) / 4.0, rel=1e-15)

    # equation (1, 0) of (alpha = 1.5, H = 0.8, t = 1)
    alpha, hurst = 1.5, 0.8
    ka = kernel_alpha_power(alpha, hurst)
    a00 = ka ** (1.0 / alpha)
    target = ka * (2.0 ** (alpha * hurst) - 1.0)
    z = newton_solve_offdiag(target, a00, alpha, 1)
    logger.debug(f"a00={a00:.6f}, a10={z:.6f}, bracket upper {a00 * 2.0**hurst:.6f}")
    assert a00 <= z <= a00 * 2.0**hurst
    assert abs(z**alpha - (z - a00) ** alpha - target) <= 1e-10

    # antipersistent branch lies in (0, a_ii)
    z = newton_solve_offdiag(0.3, 1.0, 1.5, -1)
    assert 0.0 < z < 1.0
    assert abs(z**1.5 - (1.0 - z) ** 1.5 - 0.3) <= 1e-10
    z = newton_solve_offdiag(-0.2, 1.0, 0.6, -1)
    assert 0.0 < z < 1.0


def test_offdiag_root_does_not_depend_on_start():
    divider("Off-diagonal root from several starts", sep="-")
    alpha, hurst = 1.5, 0.8
    ka = kernel_alpha_power(alpha, hurst)
    a00 = ka ** (1.0 / alpha)
    target = ka * (2.0 ** (alpha * hurst) - 1.0)
    reference = newton_solve_offdiag(target, a00, alpha, 1)
    for factor in (1.0, 1.05, 1.5, 3.0, 20.0):
        z = newton_solve_offdiag(target, a00, alpha, 1, start=a00 * factor)
        assert z == pytest.approx(reference, rel=1e-8)

    for alpha in (0.6, 1.5):
        reference = newton_solve_offdiag(0.3, 1.0, alpha, -1)
        for start in (0.02, 0.3, 0.6, 0.99, 1.0):
            assert newton_solve_offdiag(0.3, 1.0, alpha, -1, start=start) == pytest.approx(reference, rel=1e-8)


def test_newton_offdiag_range_errors():
    with pytest.raises(NoSolutionError):
        newton_solve_offdiag(0.5, 1.0, 1.5, 1)
    with pytest.raises(NoSolutionError):
        newton_solve_offdiag(1.5, 1.0, 1.5, -1)
    with pytest.raises(ParameterError):
        newton_solve_offdiag(2.0, 1.0, 0.8, 1)
    with pytest.raises(ParameterError):
        newton_solve_offdiag(0.5, 0.0, 1.5, -1)


def test_solved_systems_have_small_residuals():
    divider("System residuals, d = 7", sep="-")
    rng = np.random.default_rng(314)
    pairs = [(1.5, 0.8), (0.7, 0.8)]
    while len(pairs) < 20:
        alpha = float(rng.uniform(1.3, 1.9))
        pairs.append((alpha, float(rng.uniform(1.0 / alpha + 0.05, 0.95))))

    n_solved = 0
    for alpha, hurst in pairs:
        coeffs = solve_or_none(alpha, hurst, 1.0, 7)
        if coeffs is None:
            logger.warning(f"alpha={alpha:.3f}, H={hurst:.3f}: no decomposition at d = 7")
            continue
        n_solved += 1
        residuals = system_residuals(coeffs)
        assert np.max(np.abs(residuals[np.tril_indices(7)])) < 1e-9
    logger.ok(f"{n_solved}/{len(pairs)} systems solved with residuals below 1e-9")
    assert solve_or_none(1.5, 0.8, 1.0, 7) is not None
    assert solve_or_none(0.7, 0.8, 1.0, 7) is not None


def test_ordering_and_positivity():
    persistent, _ = solve_coefficients(1.5, 0.8, 1.0, 7)
    antipersistent, _ = solve_coefficients(0.7, 0.8, 1.0, 7)
    # the Gaussian factor obeys the same ordering
    gaussian_up, _ = solve_coefficients(2.0, 0.8, 1.0, 7)
    gaussian_down, _ = solve_coefficients(2.0, 0.3, 1.0, 7)
    cases = ((persistent, 1.0), (antipersistent, -1.0), (gaussian_up, 1.0), (gaussian_down, -1.0))
    for coeffs, sign in cases:
        a = coeffs.a
        assert np.all(a[np.tril_indices(7)] > 0)
        for j in range(7):
            column = a[j:, j]
            assert np.all(sign * np.diff(column) > 0)
    assert persistent.direction == 1 and antipersistent.direction == -1


def test_failed_solves_carry_the_report():
    divider("Failures beyond the existence frontier", sep="-")
    failures = 0
    for alpha in (0.5, 0.7, 0.9):
        for hurst in (0.1, 0.2, 0.3):
            coeffs, report = try_solve_coefficients(alpha, hurst, 1.0, 7)
            if report.ok:
                continue
            failures += 1
            assert report.frontier_violation and report.failed_equation is not None
            row, col = report.failed_equation
            assert np.isnan(coeffs.a[row, row])
            with pytest.raises(DecompositionError) as info:
                solve_coefficients(alpha, hurst, 1.0, 7)
            assert info.value.report.failed_equation == report.failed_equation
            assert info.value.details["ok"] is False
    logger.debug(f"{failures} failing cells among small (alpha, H)")


def test_cache_and_table():
    first, _ = try_solve_coefficients(1.5, 0.8, 1.0, 5)
    second, _ = try_solve_coefficients(1.5, 0.8, 1.0, 5)
    assert first is second
    assert not first.a.flags.writeable

    table = coefficient_table(first)
    assert table.columns == ["alpha", "hurst", "t", "i", "j", "a"]
    assert table.height == 15
    with pytest.raises(ParameterError):
        solve_coefficients(1.5, 0.8, 1.0, 0)
    with pytest.raises(ParameterError):
        solve_coefficients(1.5, 0.8, -1.0, 3)


if __name__ == "__main__":
    test_closed_form_independent_increments()
    test_gaussian_case_is_cholesky()
    test_row_zero_anchor()
    test_newton_offdiag()
    test_offdiag_root_does_not_depend_on_start()
    test_newton_offdiag_range_errors()
    test_solved_systems_have_small_residuals()
    test_ordering_and_positivity()
    test_failed_solves_carry_the_report()
    test_cache_and_table()
