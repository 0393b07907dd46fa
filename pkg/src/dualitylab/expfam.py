"""Closed-form geometry of the family ``p(x; theta) = exp(theta |x|**n - psi(theta))``.

Natural parameter ``theta < 0``, potential ``psi = ln Z`` with
``Z = (2/n) (-theta)**(-1/n) Gamma(1/n)``, expectation parameter
``eta = E|X|**n = -1/(n theta)`` and Fisher metric ``g = 1/(n theta**2)``.
Every closed form has a quadrature counterpart here (``normalization_oracle``,
``moment_oracle``, ``kl_oracle``) so the two routes can be compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import DEFAULT_QUAD, QuadConfig, integrate_halfline, log_gamma


def _check_n(n: float) -> float:
    n = float(n)
    if not n >= 1.0:
        raise DomainError(f"moment exponent n must be >= 1, got {n!r}")
    return n


def _check_theta(theta: float, name: str = "theta") -> float:
    theta = float(theta)
    if not theta < 0.0:
        raise DomainError(f"{name} must be negative, got {theta!r}")
    if math.isinf(theta):
        raise DomainError(f"{name} must be finite")
    return theta


def _check_eta(eta: float) -> float:
    eta = float(eta)
    if not eta > 0.0 or math.isinf(eta):
        raise DomainError(f"eta must be positive and finite, got {eta!r}")
    return eta


def potential_constant(n: float) -> float:
    """``C_n = ln(2 Gamma(1/n) / n)``, the potential at ``theta = -1``."""
    n = _check_n(n)
    return math.log(2.0 / n) + log_gamma(1.0 / n)


def potential(n: float, theta: float) -> float:
    n = _check_n(n)
    theta = _check_theta(theta)
    return -math.log(-theta) / n + potential_constant(n)


@dataclass(frozen=True)
class FamilyPoint:
    n: float
    theta: float
    Z: float
    psi: float
    eta: float
    g: float


@dataclass(frozen=True)
class ProductPoint:
    n: float
    theta1: float
    theta2: float

    def __post_init__(self):
        _check_n(self.n)
        _check_theta(self.theta1, "theta1")
        _check_theta(self.theta2, "theta2")

    @property
    def potential(self) -> float:
        return potential(self.n, self.theta1) + potential(self.n, self.theta2)

    def metric(self) -> np.ndarray:
        """Diagonal Fisher metric of the product manifold."""
        return np.diag(
            [fisher_metric(self.n, self.theta1), fisher_metric(self.n, self.theta2)]
        )


def family_point(n: float, theta: float) -> FamilyPoint:
    n = _check_n(n)
    theta = _check_theta(theta)
    psi = potential(n, theta)
    return FamilyPoint(
        n=n,
        theta=theta,
        Z=math.exp(psi),
        psi=psi,
        eta=-1.0 / (n * theta),
        g=1.0 / (n * theta * theta),
    )


def expectation(n: float, theta: float) -> float:
    return -1.0 / (_check_n(n) * _check_theta(theta))


def fisher_metric(n: float, theta: float) -> float:
    theta = _check_theta(theta)
    return 1.0 / (_check_n(n) * theta * theta)


def cubic_form(n: float, theta: float) -> float:
    """Third derivative of the potential, ``-2 / (n theta**3)``.

    Positive for every admissible ``theta``, so it never vanishes.
    """
    theta = _check_theta(theta)
    return -2.0 / (_check_n(n) * theta**3)


def legendre_inverse(n: float, eta: float) -> float:
    """Natural parameter with expectation ``eta``: ``theta = -1/(n eta)``."""
    return -1.0 / (_check_n(n) * _check_eta(eta))


def fenchel_conjugate(n: float, eta: float) -> float:
    """Dual potential ``psi*(eta) = sup_theta (theta eta - psi(theta))``.

    Closed form ``-1/n - ln(n eta)/n - C_n``.
    """
    n = _check_n(n)
    eta = _check_eta(eta)
    return -1.0 / n - math.log(n * eta) / n - potential_constant(n)


def pdf(p: FamilyPoint, x):
    """Density ``exp(theta |x|**n - psi)``; accepts scalars or arrays."""
    x = np.asarray(x, dtype=float)
    out = np.exp(p.theta * np.abs(x) ** p.n - p.psi)
    return float(out) if out.ndim == 0 else out


def divergence(n: float, theta: float, theta_ref: float) -> float:
    """Bregman divergence of the potential with ``theta_ref`` as reference.

    ``D(theta || theta_ref) = psi(theta) - psi(theta_ref)
    - eta(theta_ref) (theta - theta_ref)``, which simplifies to
    ``(ln(theta_ref/theta) + theta/theta_ref - 1) / n``.  The potential
    constant cancels, so the value does not depend on ``C_n``.
    """
    n = _check_n(n)
    theta = _check_theta(theta)
    theta_ref = _check_theta(theta_ref, "theta_ref")
    r = theta / theta_ref
    return _r_minus_one_minus_log(r) / n


def _r_minus_one_minus_log(r: float) -> float:
    if abs(r - 1.0) >= 0.1:
        return r - 1.0 - math.log(r)
    # exp(u) - 1 - u with u = ln r, summed as a series to avoid cancellation
    u = math.log1p(r - 1.0)
    term = u * u / 2.0
    total = term
    for k in range(3, 30):
        term *= u / k
        total += term
        if abs(term) < 1e-17 * total:
            break
    return total


def divergence_bregman(n: float, theta: float, theta_ref: float) -> float:
    """Same divergence assembled term by term from ``psi`` and ``eta``."""
    return (
        potential(n, theta)
        - potential(n, theta_ref)
        - expectation(n, theta_ref) * (theta - theta_ref)
    )


def divergence_fenchel(n: float, theta: float, theta_ref: float) -> float:
    """Three-term form ``psi(theta) + psi*(eta_ref) - theta * eta_ref``."""
    eta_ref = expectation(n, theta_ref)
    return potential(n, theta) + fenchel_conjugate(n, eta_ref) - theta * eta_ref


def product_divergence(n: float, a: ProductPoint, b: ProductPoint) -> float:
    """Divergence on the product manifold: the sum of the two axis divergences."""
    return divergence(n, a.theta1, b.theta1) + divergence(n, a.theta2, b.theta2)


# ---------------------------------------------------------------- oracles


def normalization_oracle(p: FamilyPoint, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """``int pdf dx`` by quadrature (twice the half-line integral)."""
    return 2.0 * integrate_halfline(lambda x: pdf(p, x), cfg).value


def moment_oracle(p: FamilyPoint, cfg: QuadConfig = DEFAULT_QUAD) -> float:
    """``E|X|**n`` by quadrature; should equal ``p.eta``."""
    return 2.0 * integrate_halfline(lambda x: x**p.n * pdf(p, x), cfg).value


def kl_oracle(
    n: float, theta: float, theta_ref: float, cfg: QuadConfig = DEFAULT_QUAD
) -> float:
    """Numerical Kullback-Leibler integral matching ``divergence(n, theta, theta_ref)``.

    The Bregman divergence of the log-partition function with reference
    ``theta_ref`` equals ``KL(p_ref || p_theta) = int p_ref ln(p_ref / p_theta)``,
    so that is the integral evaluated here.
    """
    p = family_point(n, theta)
    q = family_point(n, theta_ref)

    def integrand(x):
        xn = x**n
        log_ratio = (q.theta - p.theta) * xn - (q.psi - p.psi)
        return np.exp(q.theta * xn - q.psi) * log_ratio

    return 2.0 * integrate_halfline(integrand, cfg).value
