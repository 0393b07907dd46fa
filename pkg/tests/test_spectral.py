"""Theta series, Poisson duality, decay profiles and Beckner ratios."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualitylab import spectral
from dualitylab.errors import DomainError, InsufficientEnvelope, TruncationCapError
from dualitylab.numerics import gamma
from dualitylab.spectral import ThetaConfig


def _direct_theta(n, tau, K=60):
    return 1 + 2 * sum(math.exp(-tau * k**n) for k in range(1, K + 1))


# ----------------------------------------------------------- theta series


def test_theta_large_tau():
    value, K = spectral.theta_series(ThetaConfig(2, 50.0))
    assert abs(value - 1.0) <= 1e-20
    assert K <= 1


def test_theta_self_dual_point():
    value, _ = spectral.theta_series(ThetaConfig(2, math.pi))
    assert value == pytest.approx(math.pi**0.25 / math.gamma(0.75), abs=1e-14)
    assert value == pytest.approx(1.08643481121331, abs=1e-13)


def test_theta_cubic_kernel():
    value, K = spectral.theta_series(ThetaConfig(3, 1.0))
    assert value == pytest.approx(_direct_theta(3, 1.0), abs=1e-15)
    assert value == pytest.approx(1.73642980760245, abs=1e-13)
    assert K <= 4


def test_theta_truncation_bound_holds():
    cfg = ThetaConfig(2.0, 0.05, 1e-12)
    value, K = spectral.theta_series(cfg)
    assert value == pytest.approx(_direct_theta(2.0, 0.05, 400), abs=1e-12)


def test_theta_cap():
    with pytest.raises(TruncationCapError):
        spectral.theta_series(ThetaConfig(2.0, 1e-12), cap=1000)


def test_theta_config_validation():
    with pytest.raises(DomainError):
        ThetaConfig(2.0, 0.0)
    with pytest.raises(DomainError):
        ThetaConfig(0.5, 1.0)


@pytest.mark.parametrize("n", [2.0, 3.0, 4.0])
def test_theta_small_tau_limit(n):
    tau = 1e-4
    value, _ = spectral.theta_series(ThetaConfig(n, tau))
    assert tau ** (1 / n) * value == pytest.approx(2 / n * gamma(1 / n), rel=1e-3)


@pytest.mark.parametrize("n", [1.5, 2.0, 3.0])
def test_theta_decreases_to_one(n):
    values = [spectral.theta_series(ThetaConfig(n, t))[0] for t in (1.0, 2.0, 5.0, 20.0, 80.0)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] == pytest.approx(1.0, abs=1e-12)


# ----------------------------------------------------------- transforms


def test_saddle_rate_gaussian():
    assert spectral.saddle_rate(2.0) == pytest.approx(math.pi**2)


@pytest.mark.parametrize("n, xi", [(1.5, 2.0), (3.0, 4.0), (2.5, 3.0)])
def test_asymptotic_transform_matches_numeric(n, xi):
    value, err = spectral.asymptotic_transform(n, xi)
    numeric = spectral.transform(n, xi, spectral.PROFILE_QUAD).value
    assert abs(value - numeric) <= max(err, 1e-14)


def test_cubic_transform_leading_term():
    # f-hat(xi) ~ -12/(2 pi xi)^4 for n = 3
    xi = 5.0
    mp.mp.dps = 30
    exact = float(mp.quad(lambda x: 2 * mp.exp(-(x**3)) * mp.cos(2 * mp.pi * xi * x), [0] + list(range(1, 20))))
    assert exact == pytest.approx(-12 / (2 * math.pi * xi) ** 4, rel=1e-4)
    assert spectral.transform(3.0, xi, spectral.PROFILE_QUAD).value == pytest.approx(exact, abs=1e-15)


# ----------------------------------------------------------- duality


def test_dual_sum_gaussian():
    value, _ = spectral.dual_theta_sum(ThetaConfig(2.0, 1.0))
    assert value == pytest.approx(spectral.theta_series(ThetaConfig(2.0, 1.0))[0], abs=1e-10)


def test_dual_sum_cubic():
    value, _ = spectral.dual_theta_sum(ThetaConfig(3.0, 1.0))
    assert value == pytest.approx(_direct_theta(3.0, 1.0), abs=1e-6)


@pytest.mark.parametrize("n", [1.5, 3.0])
def test_dual_sum_small_tau_leading_term(n):
    tau = 1e-6
    value, _ = spectral.dual_theta_sum(ThetaConfig(n, tau))
    assert value == pytest.approx(tau ** (-1 / n) * 2 / n * gamma(1 / n), rel=1e-3)


def test_poisson_gaussian():
    rep = spectral.poisson_residual(ThetaConfig(2.0, 1.0))
    assert rep.residual <= 1e-10
    assert rep.analytic_fhat
    assert rep.residual == abs(rep.primal_sum - rep.dual_sum)


def test_poisson_self_dual_point():
    rep = spectral.poisson_residual(ThetaConfig(2.0, math.pi))
    assert rep.residual <= 4 * np.finfo(float).eps


@pytest.mark.parametrize("tau", [0.5, 1.0, 2.0])
def test_poisson_cubic(tau):
    rep = spectral.poisson_residual(ThetaConfig(3.0, tau))
    assert rep.residual <= 1e-6
    assert rep.residual <= rep.error_budget
    assert not rep.analytic_fhat


@given(st.sampled_from([1.25, 1.5, 2.5, 3.0, 4.0, 5.0]), st.floats(min_value=0.25, max_value=4.0))
@settings(max_examples=25, deadline=None)
def test_poisson_within_budget(n, tau):
    rep = spectral.poisson_residual(ThetaConfig(n, tau))
    assert rep.residual <= rep.error_budget


def test_jacobi_examples():
    assert spectral.jacobi_residual(math.pi) <= 4 * np.finfo(float).eps
    assert spectral.jacobi_residual(1.0) <= 1e-10
    assert spectral.jacobi_residual(0.2) <= 1e-9


@given(st.floats(min_value=0.1, max_value=10.0))
@settings(deadline=None)
def test_jacobi_involution(tau):
    partner = math.pi**2 / tau
    assert math.pi**2 / partner == pytest.approx(tau, rel=1e-15)
    assert spectral.jacobi_residual(tau) <= 1e-9
    assert spectral.jacobi_residual(partner) <= 1e-9 * math.sqrt(partner)


def test_conjugate_exponent():
    assert spectral.conjugate_exponent(2) == 2.0
    assert spectral.conjugate_exponent(3) == 1.5
    assert spectral.conjugate_exponent(1000) == pytest.approx(1000 / 999, rel=1e-15)
    assert spectral.conjugate_exponent(1000) == pytest.approx(1.001, abs=1e-5)
    with pytest.raises(DomainError):
        spectral.conjugate_exponent(1.0)


# ------------------------------------------------------------- profiles


def test_profile_gaussian():
    prof = spectral.spectral_profile(2.0)
    assert prof.q_hat == pytest.approx(2.0, abs=0.05)
    assert prof.envelope_kind == "absolute_value"
    assert prof.xi_samples[0][1] == pytest.approx(math.sqrt(math.pi), abs=1e-14)


def test_profile_cubic():
    prof = spectral.spectral_profile(3.0)
    assert prof.xi_samples[0][1] == pytest.approx(2 / 3 * gamma(1 / 3), abs=1e-12)
    assert prof.q_hat == pytest.approx(1.5, abs=0.1)


def test_profile_quartic():
    prof = spectral.spectral_profile(4.0)
    assert prof.envelope_kind == "local_maxima"
    assert prof.q_hat == pytest.approx(4 / 3, abs=0.1)
    assert prof.q_hat > 1.0


def test_profile_needs_enough_envelope():
    with pytest.raises(InsufficientEnvelope):
        spectral.spectral_profile(4.0, xi_max=1.0, sample_count=16)


def test_profile_sample_count_validation():
    with pytest.raises(DomainError):
        spectral.spectral_profile(3.0, sample_count=8)


def test_gaussian_shape_dichotomy():
    assert spectral.gaussian_shape_residual(2.0) <= 1e-6
    assert spectral.gaussian_shape_residual(3.0) >= 1e-2
    assert spectral.gaussian_shape_residual(4.0) >= 1e-2


# --------------------------------------------------------------- Beckner


def test_beckner_bound_values():
    assert spectral.beckner_bound(2.0) == 1.0
    p = 1.5
    assert spectral.beckner_bound(p) == pytest.approx(math.sqrt(p ** (1 / p) / 3 ** (1 / 3)))


def test_kernel_norm_against_quadrature():
    from scipy import integrate

    for n, p in ((2.0, 1.5), (3.0, 1.25)):
        ref = (2 * integrate.quad(lambda x: math.exp(-p * x**n), 0, math.inf)[0]) ** (1 / p)
        assert spectral.kernel_lp_norm(n, p) == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("n", [1.5, 2.0, 3.0, 4.0])
def test_plancherel(n):
    ratio, bound = spectral.hy_ratio(n, 2.0)
    assert bound == 1.0
    assert ratio == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("p", [1.25, 1.5, 1.75])
def test_gaussian_attains_beckner(p):
    ratio, bound = spectral.hy_ratio(2.0, p)
    assert ratio == pytest.approx(bound, abs=1e-4)


def test_cubic_kernel_strictly_below_bound():
    ratio, bound = spectral.hy_ratio(3.0, 1.5)
    assert bound - ratio > 1e-3


def test_hy_domain():
    with pytest.raises(DomainError):
        spectral.hy_ratio(2.0, 1.0)
    with pytest.raises(DomainError):
        spectral.hy_ratio(2.0, 2.5)
