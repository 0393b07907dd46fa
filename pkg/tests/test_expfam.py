"""Closed-form geometry of the |x|^n family and its quadrature oracles."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualitylab import expfam
from dualitylab.errors import DomainError

ns = st.sampled_from([1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0])
thetas = st.floats(min_value=-20.0, max_value=-0.05)


def test_gaussian_point():
    p = expfam.family_point(2, -1)
    assert p.g == 0.5
    assert p.eta == 0.5
    assert p.Z == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert p.psi == pytest.approx(0.5 * math.log(math.pi), abs=1e-14)


def test_fenchel_conjugate_value():
    # psi*(eta) = -1/n - ln(n eta)/n - ln(2 Gamma(1/n)/n); at n=3, eta=1/3 the log term vanishes
    expected = -1 / 3 - float(mp.log(2 * mp.gamma(mp.mpf(1) / 3) / 3))
    assert expfam.fenchel_conjugate(3, 1 / 3) == pytest.approx(expected, abs=1e-14)
    assert expfam.fenchel_conjugate(3, 1 / 3) == pytest.approx(-0.913288872152936, abs=1e-13)


def test_divergence_values():
    assert expfam.divergence(2, -2, -1) == pytest.approx(0.5 * (1 - math.log(2)), abs=1e-15)
    assert expfam.divergence(2, -2, -1) == pytest.approx(0.153426409720027, abs=1e-14)
    assert expfam.divergence(3, -math.e, -1) == pytest.approx((math.e - 2) / 3, abs=1e-15)
    assert expfam.divergence(3, -1, -1) == 0.0


@pytest.mark.parametrize("theta", [0.0, 1.0, math.inf, -math.inf])
def test_theta_domain(theta):
    with pytest.raises(DomainError):
        expfam.family_point(2, theta)


def test_n_domain():
    with pytest.raises(DomainError):
        expfam.family_point(0.5, -1)


def test_eta_domain():
    with pytest.raises(DomainError):
        expfam.legendre_inverse(2, 0.0)


@given(ns, thetas)
def test_metric_and_cubic_form(n, theta):
    assert expfam.fisher_metric(n, theta) == pytest.approx(1 / (n * theta * theta))
    assert expfam.cubic_form(n, theta) > 0.0


@given(ns, thetas)
def test_finite_differences_of_potential(n, theta):
    h = 1e-4 * abs(theta)
    psi = lambda t: expfam.potential(n, t)  # noqa: E731
    d1 = (psi(theta + h) - psi(theta - h)) / (2 * h)
    d3 = (psi(theta + 2 * h) - 2 * psi(theta + h) + 2 * psi(theta - h) - psi(theta - 2 * h)) / (2 * h**3)
    assert d1 == pytest.approx(expfam.expectation(n, theta), rel=1e-6)
    assert d3 == pytest.approx(expfam.cubic_form(n, theta), rel=1e-2)


@given(ns, thetas)
def test_legendre_round_trip_and_fenchel_young(n, theta):
    eta = expfam.expectation(n, theta)
    assert expfam.legendre_inverse(n, eta) == pytest.approx(theta, rel=1e-14)
    lhs = expfam.potential(n, theta) + expfam.fenchel_conjugate(n, eta)
    assert lhs == pytest.approx(theta * eta, abs=1e-12)


@given(ns, thetas, thetas)
def test_divergence_forms_agree(n, a, b):
    d = expfam.divergence(n, a, b)
    assert d >= 0.0
    assert expfam.divergence_bregman(n, a, b) == pytest.approx(d, abs=1e-12)
    assert expfam.divergence_fenchel(n, a, b) == pytest.approx(d, abs=1e-12)


@given(ns, thetas)
def test_divergence_vanishes_only_on_diagonal(n, a):
    assert expfam.divergence(n, a, a) == 0.0
    assert expfam.divergence(n, a * 1.001, a) > 0.0


def test_divergence_near_diagonal_keeps_precision():
    # (r - 1 - ln r)/n with r = 1 + 1e-7 is 1e-14/(2n) up to O(1e-21)
    r = 1 + 1e-7
    assert expfam.divergence(2, -r, -1.0) == pytest.approx((r - 1) ** 2 / 4 * (1 - 2 * (r - 1) / 3), rel=1e-9)


@pytest.mark.parametrize("n", [1.0, 1.5, 2.0, 3.0, 4.0])
@pytest.mark.parametrize("theta", [-0.3, -1.0, -4.0])
def test_quadrature_oracles(n, theta):
    p = expfam.family_point(n, theta)
    assert expfam.normalization_oracle(p) == pytest.approx(1.0, abs=1e-12)
    assert expfam.moment_oracle(p) == pytest.approx(p.eta, abs=1e-10)


@pytest.mark.parametrize("n, a, b", [(2, -2.0, -1.0), (3, -math.e, -1.0), (1.5, -0.4, -3.0), (4, -7.0, -0.2)])
def test_kl_oracle_matches_closed_form(n, a, b):
    assert expfam.kl_oracle(n, a, b) == pytest.approx(expfam.divergence(n, a, b), abs=1e-10)


def test_kl_orientation_against_mpmath():
    # D(theta || theta_ref) is the KL integral with p_ref in front of the log
    n, a, b = 3, -math.e, -1.0
    p, q = expfam.family_point(n, a), expfam.family_point(n, b)
    mp.mp.dps = 25
    f = lambda x: 2 * mp.exp(b * x**n - q.psi) * ((b - a) * x**n - (q.psi - p.psi))  # noqa: E731
    assert float(mp.quad(f, [0, 1, mp.inf])) == pytest.approx(expfam.divergence(n, a, b), abs=1e-14)


def test_pdf_accepts_arrays():
    p = expfam.family_point(2, -1)
    out = expfam.pdf(p, np.array([0.0, 1.0]))
    assert out.shape == (2,)
    assert out[0] == pytest.approx(1 / math.sqrt(math.pi))


def test_product_point_metric_and_divergence():
    a = expfam.ProductPoint(3, -2.0, -5.0)
    b = expfam.ProductPoint(3, -1.0, -1.0)
    np.testing.assert_allclose(a.metric(), np.diag([1 / 12, 1 / 75]))
    assert expfam.product_divergence(3, a, b) == pytest.approx(
        expfam.divergence(3, -2.0, -1.0) + expfam.divergence(3, -5.0, -1.0)
    )
    assert a.potential == pytest.approx(expfam.potential(3, -2.0) + expfam.potential(3, -5.0))
    with pytest.raises(DomainError):
        expfam.ProductPoint(3, -1.0, 0.5)
