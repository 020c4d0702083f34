#!/usr/bin/env python3
"""
Tests for the symmetric alpha-stable primitives

- characteristic function values and symmetry
- CMS sampling: determinism, Gaussian and Cauchy oracles
- absolute moments against closed forms and Monte Carlo
"""

import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from lfsm.core.rng import RngState
from lfsm.core.stable import StableScale, abs_moment, sample_sas, sas_char_fn
from lfsm_common.exceptions import ParameterError
from lfsm_common.log_kit import divider, logger


def test_char_fn_values():
    divider("sas_char_fn", sep="-")
    assert sas_char_fn(0.0, StableScale(0.7, 3.0)) == 1.0
    assert sas_char_fn(1.0, StableScale(2.0, 1.0)) == pytest.approx(math.exp(-1.0), rel=1e-12)
    assert sas_char_fn(0.5, StableScale(1.5, 2.0)) == pytest.approx(math.exp(-1.0), rel=1e-12)

    theta = np.linspace(0.0, 5.0, 51)
    values = sas_char_fn(theta, StableScale(1.2, 0.8))
    assert np.all(np.diff(values) < 0)
    np.testing.assert_array_equal(values, sas_char_fn(-theta, StableScale(1.2, 0.8)))
    logger.ok("Characteristic function is even and decreasing in |theta|")


def test_scale_validation():
    with pytest.raises(ParameterError):
        StableScale(0.0)
    with pytest.raises(ParameterError):
        StableScale(2.5)
    with pytest.raises(ParameterError):
        StableScale(1.5, -1.0)
    with pytest.raises(ParameterError):
        RngState(-1)


def test_sampling_is_deterministic():
    s = StableScale(1.3, 0.5)
    first = sample_sas(s, 1000, RngState(7))
    second = sample_sas(s, 1000, RngState(7))
    np.testing.assert_array_equal(first, second)
    assert not np.array_equal(first, sample_sas(s, 1000, RngState(7).child(0)))
    assert sample_sas(s, 0, RngState(7)).size == 0


def test_gaussian_case_matches_char_fn():
    divider("CMS sampler, alpha = 2", sep="-")
    samples = sample_sas(StableScale(2.0, 1.0), 100_000, RngState(11))
    for theta in (0.5, 1.0, 2.0):
        empirical = float(np.cos(theta * samples).mean())
        expected = sas_char_fn(theta, StableScale(2.0, 1.0))
        logger.debug(f"theta={theta}: empirical {empirical:.5f}, exact {expected:.5f}")
        assert abs(empirical - expected) < 0.01
    # unit-scale alpha = 2 is Normal(0, 2)
    assert samples.var() == pytest.approx(2.0, rel=0.03)


def test_cauchy_case():
    divider("CMS sampler, alpha = 1", sep="-")
    samples = sample_sas(StableScale(1.0, 1.0), 100_000, RngState(12))
    median = float(np.median(samples))
    cdf_at_one = float((samples <= 1.0).mean())
    logger.debug(f"median {median:.4f}, F(1) {cdf_at_one:.4f}")
    assert abs(median) < 0.02
    assert abs(cdf_at_one - 0.75) < 0.01

    # alpha within the snap of 1 uses the same Cauchy path
    near = sample_sas(StableScale(1.0 + 1e-7, 1.0), 10, RngState(12))
    np.testing.assert_array_equal(near, samples[:10])


def test_abs_moment_closed_forms():
    assert abs_moment(1.5, 0.0) == 1.0
    assert abs_moment(2.0, 1.0) == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-12)
    assert abs_moment(2.0, 2.0) == pytest.approx(2.0, rel=1e-12)
    assert abs_moment(1.5, 1.0) == pytest.approx(2.0 * gamma_fn(1.0 / 3.0) / math.pi, rel=1e-12)
    # p -> 1 limit is continuous
    assert abs_moment(1.5, 1.0 - 1e-7) == pytest.approx(abs_moment(1.5, 1.0), rel=1e-5)
    # the alpha -> 2 limit of the stable formula agrees with the Gaussian one
    assert abs_moment(1.999999, 0.5) == pytest.approx(abs_moment(2.0, 0.5), rel=1e-4)


def test_abs_moment_domain():
    with pytest.raises(ParameterError):
        abs_moment(1.5, 1.5)
    with pytest.raises(ParameterError):
        abs_moment(0.8, 1.0)
    with pytest.raises(ParameterError):
        abs_moment(1.5, -1.0)
    with pytest.raises(ParameterError):
        abs_moment(2.5, 0.5)


def test_abs_moment_monte_carlo():
    divider("abs_moment vs Monte Carlo", sep="-")
    samples = sample_sas(StableScale(1.5, 1.0), 1_000_000, RngState(13))
    # E|X|^{2p} must be finite for the sample mean to settle
    for p in (0.25, 0.5, 0.7):
        empirical = float(np.mean(np.abs(samples) ** p))
        exact = abs_moment(1.5, p)
        logger.debug(f"p={p}: empirical {empirical:.5f}, exact {exact:.5f}")
        assert empirical == pytest.approx(exact, rel=0.01)



def test_weighted_sum_char_fn():
    """Sum a_i X_i of independent SaS variables is SaS with scale^alpha = sum |a_i|^alpha scale_i^alpha."""
    divider("Weighted sum of independent SaS variables", sep="-")
    alpha, n = 1.5, 100_000
    weights = np.array([0.5, -1.2, 2.0])
    scales = np.array([1.0, 0.4, 0.7])
    samples = [sample_sas(StableScale(alpha, s), n, RngState(17).child(i)) for i, s in enumerate(scales)]
    total = sum(w * x for w, x in zip(weights, samples))
    combined = StableScale(alpha, float(np.sum(np.abs(weights * scales) ** alpha) ** (1.0 / alpha)))
    for theta in (0.1, 0.3, 0.6, 1.0):
        empirical = float(np.cos(theta * total).mean())
        expected = math.exp(-np.sum(np.abs(weights * scales) ** alpha) * theta**alpha)
        logger.debug(f"theta={theta}: empirical {empirical:.5f}, exact {expected:.5f}")
        assert abs(empirical - expected) < 0.01
        assert sas_char_fn(theta, combined) == pytest.approx(expected, rel=1e-12)


def test_first_moment_diverges_below_alpha_one():
    divider("Sample mean of |X| for alpha = 0.8", sep="-")

    def median_mean_abs(alpha: float, n: int) -> float:
        means = [np.abs(sample_sas(StableScale(alpha, 1.0), n, RngState(19).child(r))).mean() for r in range(25)]
        return float(np.median(means))

    small, large = median_mean_abs(0.8, 100), median_mean_abs(0.8, 10_000)
    # the typical sample mean grows like n^{1/alpha - 1}, a factor 100^{0.25} here
    logger.debug(f"alpha=0.8: median mean |X| {small:.3f} (n=100), {large:.3f} (n=10000)")
    assert large > 2.0 * small

    finite_small, finite_large = median_mean_abs(1.5, 100), median_mean_abs(1.5, 10_000)
    assert finite_large == pytest.approx(abs_moment(1.5, 1.0), rel=0.1)
    assert finite_large < 1.5 * finite_small


if __name__ == "__main__":
    test_char_fn_values()
    test_scale_validation()
    test_sampling_is_deterministic()
    test_gaussian_case_matches_char_fn()
    test_cauchy_case()
    test_abs_moment_closed_forms()
    test_abs_moment_domain()
    test_abs_moment_monte_carlo()
    test_weighted_sum_char_fn()
    test_first_moment_diverges_below_alpha_one()
