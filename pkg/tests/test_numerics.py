"""Special functions, quadrature, root finding and the oscillatory transform."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from dualitylab.errors import BadBracket, DomainError, EvaluationError, NonConvergence
from dualitylab.numerics import (
    QuadConfig,
    duplication_residual,
    find_root_bracketed,
    fourier_cosine_transform,
    gamma,
    integrate_halfline,
    integrate_interval,
    kernel_tail_bound,
    log_gamma,
    wynn_epsilon,
    zeta_real,
    zeta_tail,
)

TIGHT = QuadConfig(abs_tol=1e-14, rel_tol=1e-14)


# ------------------------------------------------------------- gamma


def test_log_gamma_third_matches_high_precision():
    assert log_gamma(1 / 3) == pytest.approx(float(mp.loggamma(mp.mpf(1) / 3)), abs=1e-13)
    assert log_gamma(1 / 3) == pytest.approx(0.985420646927767, abs=1e-13)


def test_gamma_half_is_sqrt_pi():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), abs=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
def test_log_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@given(st.floats(min_value=0.01, max_value=150.0))
def test_log_gamma_agrees_with_libm(x):
    assert log_gamma(x) == pytest.approx(math.lgamma(x), abs=2e-13, rel=1e-14)


@given(st.floats(min_value=0.05, max_value=50.0))
def test_log_gamma_recurrence(x):
    assert log_gamma(x + 1) - log_gamma(x) == pytest.approx(math.log(x), abs=1e-12)


@given(st.floats(min_value=0.1, max_value=20.0))
def test_duplication_residual_relative(s):
    assert duplication_residual(s) / gamma(s) <= 1e-12


# -------------------------------------------------------------- zeta


@pytest.mark.parametrize(
    "s, expected",
    [(2.0, math.pi**2 / 6), (4.0, math.pi**4 / 90), (6.0, 1.01734306198445), (3.0, 1.2020569031595942)],
)
def test_zeta_values(s, expected):
    assert zeta_real(s) == pytest.approx(expected, abs=1e-14)


@given(st.floats(min_value=1.05, max_value=30.0), st.integers(min_value=1, max_value=500))
@settings(max_examples=60)
def test_zeta_tail_matches_hurwitz(s, start):
    assert zeta_tail(s, start) == pytest.approx(float(mp.zeta(s, start)), rel=1e-12)


def test_zeta_rejects_pole():
    with pytest.raises(DomainError):
        zeta_real(1.0)


# -------------------------------------------------------- quadrature


@pytest.mark.parametrize(
    "f, expected",
    [
        (lambda x: np.exp(-x), 1.0),
        (lambda x: np.exp(-x * x), math.sqrt(math.pi) / 2),
        (lambda x: np.exp(-x**3), math.gamma(4 / 3)),
        (lambda x: x ** (-2 / 3) * np.exp(-x), math.gamma(1 / 3)),
        (lambda x: x**3 * np.exp(-x * x), 0.5),
    ],
)
def test_halfline_integrals(f, expected):
    r = integrate_halfline(f, TIGHT)
    assert r.converged
    assert r.value == pytest.approx(expected, abs=1e-13)


def test_halfline_with_lower_limit_matches_scipy():
    r = integrate_halfline(lambda x: np.exp(-x) / x, TIGHT, lower=1.0)
    assert r.value == pytest.approx(special.exp1(1.0), abs=1e-13)


def test_interval_endpoint_singularity():
    r = integrate_interval(lambda t: t**-0.75, 0.0, 1.0, TIGHT)
    assert r.value == pytest.approx(4.0, abs=1e-12)


def test_interval_reversed_and_degenerate():
    f = lambda x: np.cos(x)  # noqa: E731
    assert integrate_interval(f, 1.0, 0.0).value == pytest.approx(-math.sin(1.0), abs=1e-12)
    assert integrate_interval(f, 2.0, 2.0).value == 0.0


@given(st.floats(min_value=-3.0, max_value=3.0), st.floats(min_value=0.1, max_value=4.0))
@settings(max_examples=40)
def test_interval_matches_scipy_quad(a, width):
    f = lambda x: np.exp(np.sin(3 * x)) * (1 + x * x)  # noqa: E731
    ref, _ = integrate.quad(f, a, a + width, epsabs=1e-13, epsrel=1e-13)
    assert integrate_interval(f, a, a + width, TIGHT).value == pytest.approx(ref, abs=1e-11)


def test_budget_exhaustion_raises_with_partial_result():
    cfg = QuadConfig(abs_tol=1e-30, rel_tol=1e-30, max_refinements=3)
    with pytest.raises(NonConvergence) as info:
        integrate_halfline(lambda x: np.exp(-x) * np.abs(np.sin(7 * x)), cfg)
    assert info.value.result is not None
    assert not info.value.result.converged


def test_nan_integrand_is_reported():
    with pytest.raises(EvaluationError):
        integrate_interval(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def test_quad_config_validation():
    with pytest.raises(DomainError):
        QuadConfig(abs_tol=0.0)
    with pytest.raises(DomainError):
        QuadConfig(max_refinements=0)


# ------------------------------------------------------------ roots


def test_root_of_t_minus_log_t():
    t = find_root_bracketed(lambda t: t - math.log(t) - 3.0, 1.0, 10.0)
    assert t == pytest.approx(4.50524149579288, abs=1e-13)


def test_root_of_t_minus_log_t_25():
    t = find_root_bracketed(lambda t: t - math.log(t) - 25.0, 1.0, 100.0)
    assert t == pytest.approx(28.3444305578899, abs=1e-12)


def test_bad_bracket():
    with pytest.raises(BadBracket):
        find_root_bracketed(lambda x: x * x + 1.0, -1.0, 1.0)


def test_non_finite_target():
    with pytest.raises(EvaluationError):
        find_root_bracketed(lambda x: math.nan, 0.0, 1.0)


@given(st.floats(min_value=-50, max_value=50), st.floats(min_value=0.5, max_value=5.0))
def test_root_of_monotone_cubic(c, k):
    g = lambda x: k * x**3 + x - c  # noqa: E731
    x = find_root_bracketed(g, -10.0, 10.0)
    assert abs(g(x)) <= 1e-10 * max(1.0, abs(c))


# -------------------------------------------------- oscillatory engine


def _mp_transform(n, xi):
    # graded breakpoints resolve the |x|**n cusp at 0; the kernel is negligible past 60
    mp.mp.dps = 30
    f = lambda x: 2 * mp.exp(-(x**n)) * mp.cos(2 * mp.pi * xi * x)  # noqa: E731
    pts = [0] + [mp.mpf(10) ** -k for k in range(12, 0, -1)] + list(range(1, 61))
    return float(mp.quad(f, pts))


@pytest.mark.parametrize("n", [1.5, 3.0, 4.0])
@pytest.mark.parametrize("xi", [0.3, 1.0, 2.5])
def test_transform_matches_mpmath(n, xi):
    assert fourier_cosine_transform(n, 1.0, xi, TIGHT).value == pytest.approx(_mp_transform(n, xi), abs=1e-13)


@given(st.floats(min_value=0.0, max_value=3.0), st.floats(min_value=0.3, max_value=4.0))
@settings(max_examples=40, deadline=None)
def test_transform_gaussian_closed_form(xi, gam):
    exact = math.sqrt(math.pi / gam) * math.exp(-(math.pi**2) * xi * xi / gam)
    assert fourier_cosine_transform(2.0, gam, xi, TIGHT).value == pytest.approx(exact, abs=1e-13)


@pytest.mark.parametrize("xi", [0.0, 0.1, 1.0, 4.0])
def test_transform_exponential_kernel_is_lorentzian(xi):
    exact = 2.0 / (1.0 + 4.0 * math.pi**2 * xi * xi)
    r = fourier_cosine_transform(1.0, 1.0, xi, QuadConfig(abs_tol=1e-11, rel_tol=1e-11))
    assert r.value == pytest.approx(exact, abs=1e-10)


def test_transform_at_zero_is_gamma_value():
    assert fourier_cosine_transform(3.0, 1.0, 0.0).value == pytest.approx(2 * math.gamma(4 / 3), abs=1e-12)


def test_transform_domain():
    with pytest.raises(DomainError):
        fourier_cosine_transform(0.5, 1.0, 1.0)
    with pytest.raises(DomainError):
        fourier_cosine_transform(2.0, -1.0, 1.0)


def test_kernel_tail_bound_is_an_upper_bound():
    for n in (1.0, 2.0, 3.0):
        for x in (0.5, 1.0, 2.0):
            exact, _ = integrate.quad(lambda t: math.exp(-(t**n)), x, math.inf)
            assert 2 * exact <= kernel_tail_bound(n, 1.0, x)


def test_wynn_accelerates_alternating_series():
    partial = np.cumsum([(-1) ** k / (k + 1) for k in range(13)])
    assert abs(wynn_epsilon(partial) - math.log(2)) < 1e-9
    assert abs(partial[-1] - math.log(2)) > 1e-2
