"""Mellin transform of Theta_n - 1 and the gamma-factor scan."""

import math

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dualitylab import mellin_zeta
from dualitylab.errors import DomainError


@pytest.mark.parametrize(
    "n, s, expected",
    [
        (2.0, 1.0, math.pi**2 / 3),
        (3.0, 1.0, 2.40411380631919),
        (2.0, 2.0, math.pi**4 / 45),
    ],
)
def test_closed_form_values(n, s, expected):
    assert mellin_zeta.mellin_closed_form(n, s) == pytest.approx(expected, abs=1e-13)


@given(st.sampled_from([1.0, 1.5, 2.0, 3.0]), st.floats(min_value=1.1, max_value=6.0))
def test_closed_form_against_mpmath(n, s):
    expected = float(2 * mp.gamma(s) * mp.zeta(n * s))
    assert mellin_zeta.mellin_closed_form(n, s) == pytest.approx(expected, rel=1e-12)


def test_riemann_case():
    s = 2.5
    assert mellin_zeta.mellin_closed_form(1.0, s) == pytest.approx(2 * math.gamma(s) * float(mp.zeta(s)), rel=1e-13)


@pytest.mark.parametrize("n, s", [(2.0, 0.5), (3.0, 1 / 3), (2.0, 0.2), (4.0, 0.25)])
def test_convergence_boundary(n, s):
    with pytest.raises(DomainError):
        mellin_zeta.mellin_closed_form(n, s)
    with pytest.raises(DomainError):
        mellin_zeta.mellin_numeric(n, s)


@pytest.mark.parametrize("n, s", [(2.0, 1.0), (2.0, 2.0), (3.0, 0.9)])
def test_numeric_examples(n, s):
    rep = mellin_zeta.mellin_numeric(n, s)
    assert rep.residual <= 1e-6
    assert rep.residual == abs(rep.numeric - rep.closed_form)
    assert rep.split_point == 1.0


def test_numeric_spot_value():
    assert mellin_zeta.mellin_numeric(2.0, 1.0).numeric == pytest.approx(3.289868, abs=1e-6)


@pytest.mark.parametrize("n", [2.0, 3.0, 4.0])
@pytest.mark.parametrize("s", [0.75, 1.0, 1.5, 2.0])
def test_numeric_grid(n, s):
    assert mellin_zeta.mellin_numeric(n, s).residual <= 1e-6


def test_numeric_non_integer_exponent():
    assert mellin_zeta.mellin_numeric(1.5, 1.2).residual <= 1e-6


def test_gamma_scan_duplication():
    rows = mellin_zeta.gamma_factor_scan(2.0, [0.5, 1.0, 2.0, 4.0])
    assert rows[1].duplication_residual <= 1e-12
    assert all(r.duplication_residual <= 1e-10 for r in rows)
    assert rows[1].ratio == pytest.approx(1 / math.sqrt(math.pi), rel=1e-13)


def test_gamma_scan_cubic():
    (row,) = mellin_zeta.gamma_factor_scan(3.0, [1.0])
    assert row.ratio == pytest.approx(1 / math.gamma(1 / 3), rel=1e-13)
    assert row.ratio == pytest.approx(0.373282173907395, abs=1e-13)
    assert row.duplication_residual is None


def test_gamma_scan_domain():
    with pytest.raises(DomainError):
        mellin_zeta.gamma_factor_scan(2.0, [0.0])
