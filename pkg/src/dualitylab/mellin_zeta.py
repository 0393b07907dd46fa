"""Mellin transform of ``Theta_n(tau) - 1`` and its gamma-zeta factorization.

Term by term, ``int_0^inf exp(-tau k**n) tau**(s-1) dtau = Gamma(s) k**(-n s)``,
so ``M[Theta_n - 1](s) = 2 Gamma(s) zeta(n s)`` for ``s > 1/n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .expfam import _check_n
from .numerics import (
    DEFAULT_QUAD,
    QuadConfig,
    duplication_residual,
    integrate_halfline,
    log_gamma,
    zeta_real,
)
from .spectral import DEFAULT_TAIL_TOL, ThetaConfig, theta_minus_one

SPLIT_POINT = 1.0
_UNDERFLOW_U = 700.0


@dataclass(frozen=True)
class MellinReport:
    n: float
    s: float
    numeric: float
    closed_form: float
    residual: float
    split_point: float
    error_estimate: float = 0.0
    evaluations: int = 0


@dataclass(frozen=True)
class GammaFactorRow:
    s: float
    ratio: float
    duplication_residual: float | None = None


def _check_s(n: float, s: float) -> float:
    s = float(s)
    if not s * n > 1.0 or math.isinf(s):
        raise DomainError(f"Mellin transform needs s > 1/n = {1.0 / n:.6g}, got s={s!r}")
    return s


def mellin_closed_form(n: float, s: float) -> float:
    """``2 Gamma(s) zeta(n s)``.

    Term by term, ``int_0^inf exp(-tau k**n) tau**(s-1) dtau = Gamma(s) k**(-n s)``.
    In the variable ``s' = n s`` this reads ``2 Gamma(s'/n) zeta(s')``.
    """
    n = _check_n(n)
    s = _check_s(n, s)
    return 2.0 * math.exp(log_gamma(s)) * zeta_real(n * s)


def mellin_numeric(
    n: float,
    s: float,
    quad: QuadConfig = DEFAULT_QUAD,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> MellinReport:
    """``int_0^inf (Theta_n(tau) - 1) tau**(s-1) dtau`` by quadrature, split at ``tau = 1``.

    On ``(0, 1]`` the substitution ``tau = exp(-u)`` turns the
    ``tau**(s - 1 - 1/n)`` growth at zero into the exponential decay
    ``exp(-(s - 1/n) u)`` on the half-line; ``Theta_n - 1`` switches to its
    dual representation when the direct sum gets long, and to the leading
    term ``(2/n) Gamma(1/n) tau**(-1/n)`` once ``tau`` underflows.  Beyond
    the split the integrand decays like ``exp(-tau)``.
    """
    n = _check_n(n)
    s = _check_s(n, s)
    f0 = 2.0 * math.exp(log_gamma(1.0 + 1.0 / n))

    def theta_m1(tau):
        return theta_minus_one(ThetaConfig(n, tau, tail_tol), quad=quad)

    def near_integrand(u):
        out = []
        for v in np.atleast_1d(u):
            v = float(v)
            if v > _UNDERFLOW_U:
                out.append(f0 * math.exp(-v * (s - 1.0 / n)) - math.exp(-v * s))
            else:
                out.append(theta_m1(math.exp(-v)) * math.exp(-v * s))
        return np.array(out)

    def far_integrand(tau):
        return np.array([theta_m1(float(t)) * float(t) ** (s - 1.0) for t in np.atleast_1d(tau)])

    near = integrate_halfline(near_integrand, quad, lower=-math.log(SPLIT_POINT))
    far = integrate_halfline(far_integrand, quad, lower=SPLIT_POINT)
    numeric = near.value + far.value
    closed = mellin_closed_form(n, s)
    return MellinReport(
        n=n,
        s=s,
        numeric=numeric,
        closed_form=closed,
        residual=abs(numeric - closed),
        split_point=SPLIT_POINT,
        error_estimate=near.error_estimate + far.error_estimate,
        evaluations=near.evaluations + far.evaluations,
    )


def gamma_factor_scan(n: float, s_grid) -> list[GammaFactorRow]:
    """``Gamma(s) / Gamma(s/n)`` on a grid, with the duplication residual at ``n = 2``.

    The residual is relative: ``|Gamma(s) - 2**(s-1) Gamma(s/2) Gamma((s+1)/2)/sqrt(pi)| / Gamma(s)``.
    """
    n = _check_n(n)
    rows = []
    for s in s_grid:
        s = float(s)
        if not s > 0.0:
            raise DomainError(f"gamma factor scan needs s > 0, got {s!r}")
        ratio = math.exp(log_gamma(s) - log_gamma(s / n))
        dup = None
        if n == 2.0:
            dup = duplication_residual(s) / math.exp(log_gamma(s))
        rows.append(GammaFactorRow(s, ratio, dup))
    return rows
