"""Generalized theta series, Poisson summation and the spectrum of ``exp(-|x|**n)``.

Conventions: ``f(x) = exp(-|x|**n)`` and ``fhat(xi) = int f(x) exp(-2 pi i xi x) dx``.
Poisson summation then reads

    Theta_n(tau) = sum_k exp(-tau |k|**n) = a * sum_m fhat(m a),   a = tau**(-1/n).

Large-``xi`` behaviour of ``fhat`` has two parts:

* an algebraic series ``sum_j c_j xi**-(n j + 1)`` generated by the
  non-smooth point ``x = 0`` (absent when ``n`` is an even integer);
* exponentially small saddle-point oscillations of size about
  ``exp(-gamma_sp xi**q)``, ``q = n/(n-1)``, present for ``n > 2``.

Dual sums evaluate ``fhat`` numerically below a switch point and use the
two asymptotic pieces (summed over ``m`` in closed form with Hurwitz tails)
above it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, InsufficientEnvelope, NonConvergence, TruncationCapError
from .expfam import _check_n
from .numerics import (
    DEFAULT_QUAD,
    QuadConfig,
    QuadResult,
    fourier_cosine_transform,
    integrate_halfline,
    log_gamma,
    zeta_tail,
)

DEFAULT_TAIL_TOL = 1e-12
DEFAULT_TERM_CAP = 10_000_000
DEFAULT_SAMPLES = 512
# f-hat values in a profile window go down to ~1e-11 (n = 4, xi = 5)
PROFILE_QUAD = QuadConfig(abs_tol=1e-16, rel_tol=1e-13)
_SQRT_PI = math.sqrt(math.pi)
_TWO_PI = 2.0 * math.pi
_SERIES_MAX_TERMS = 200


def _check_positive(value: float, name: str) -> float:
    value = float(value)
    if not value > 0.0 or math.isinf(value):
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def _is_even_integer(x: float) -> bool:
    return abs(x / 2.0 - round(x / 2.0)) < 1e-12


@dataclass(frozen=True)
class ThetaConfig:
    n: float
    tau: float
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        _check_n(self.n)
        _check_positive(self.tau, "tau")
        _check_positive(self.tail_tol, "tail_tol")


@dataclass(frozen=True)
class PoissonReport:
    n: float
    tau: float
    primal_sum: float
    dual_sum: float
    residual: float
    primal_terms: int
    dual_terms: int
    quad_error: float
    analytic_fhat: bool = False
    error_budget: float = 0.0


@dataclass(frozen=True)
class SpectralProfile:
    n: float
    xi_samples: tuple[tuple[float, float], ...]
    envelope_points: tuple[tuple[float, float], ...]
    q_hat: float
    gamma_hat: float
    fit_residual: float
    envelope_kind: str = "local_maxima"
    analytic_fhat: bool = False


@dataclass(frozen=True)
class DualSum:
    value: float
    terms: int
    error: float
    analytic: bool
    notes: tuple[str, ...] = field(default_factory=tuple)


# ------------------------------------------------------------ transforms


def conjugate_exponent(n: float) -> float:
    n = float(n)
    if not n > 1.0:
        raise DomainError(f"conjugate exponent needs n > 1, got {n!r}")
    return n / (n - 1.0)


def saddle_rate(n: float) -> float:
    """Exponential decay constant of the saddle-point part of ``fhat`` (``n > 2``).

    ``gamma_sp = (1 - 1/n) (2 pi)**q n**(-1/(n-1)) sin(pi / (2 (n - 1)))``;
    ``n = 2`` gives ``pi**2``, the exact Gaussian rate.
    """
    n = float(n)
    if not n >= 2.0:
        raise DomainError(f"saddle rate defined for n >= 2, got {n!r}")
    q = conjugate_exponent(n)
    return (
        (1.0 - 1.0 / n)
        * _TWO_PI**q
        * n ** (-1.0 / (n - 1.0))
        * math.sin(math.pi / (2.0 * (n - 1.0)))
    )


def gaussian_transform(xi):
    """Exact ``fhat`` for ``n = 2``: ``sqrt(pi) exp(-pi**2 xi**2)``."""
    xi = np.asarray(xi, dtype=float)
    out = _SQRT_PI * np.exp(-(math.pi**2) * xi * xi)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=65536)
def _fhat_numeric(n: float, xi: float, quad: QuadConfig) -> QuadResult:
    return fourier_cosine_transform(n, 1.0, xi, quad)


def transform(n: float, xi: float, quad: QuadConfig = DEFAULT_QUAD, analytic: bool = True) -> QuadResult:
    """``fhat(xi)`` for the unit kernel; closed form at ``n = 2`` when ``analytic``."""
    n = _check_n(n)
    xi = abs(float(xi))
    if analytic and n == 2.0:
        return QuadResult(gaussian_transform(xi), 0.0, 0, True)
    return _fhat_numeric(n, xi, quad)


@lru_cache(maxsize=None)
def _series_coefficients(n: float) -> tuple[tuple[float, float], ...]:
    """``(exponent, coefficient)`` pairs of the algebraic expansion of ``fhat``.

    ``c_j = 2 (-1)**(j+1) Gamma(n j + 1) sin(pi n j / 2) / (j! (2 pi)**(n j + 1))``
    multiplies ``xi**-(n j + 1)``; terms with ``n j`` even vanish exactly.
    """
    out = []
    for j in range(1, _SERIES_MAX_TERMS + 1):
        nj = n * j
        if _is_even_integer(nj):
            continue
        s = math.sin(0.5 * math.pi * nj)
        log_mag = (
            math.log(2.0)
            + log_gamma(nj + 1.0)
            - log_gamma(j + 1.0)
            - (nj + 1.0) * math.log(_TWO_PI)
            + math.log(abs(s))
        )
        if log_mag > 700.0:
            break
        sign = (1.0 if j % 2 else -1.0) * math.copysign(1.0, s)
        out.append((nj + 1.0, sign * math.exp(log_mag)))
    return tuple(out)


def _truncated_series(n: float, xi: float, power_sum=None):
    """Sum the algebraic expansion at ``xi`` up to its smallest term.

    With ``power_sum(p)`` supplied, ``xi**-p`` is replaced by it (used for
    sums over the dual lattice).  Returns ``(value, error_estimate)``.
    """
    coeffs = _series_coefficients(n)
    if not coeffs:
        return 0.0, 0.0
    total = 0.0
    last = math.inf
    for p, c in coeffs:
        size = abs(c) * xi ** (-p)
        if size > last:
            return total, last
        term = c * (power_sum(p) if power_sum is not None else xi ** (-p))
        total += term
        last = size
        if size <= 1e-18 * abs(total):
            return total, size
    return total, last


def asymptotic_transform(n: float, xi: float) -> tuple[float, float]:
    """Algebraic-series value of ``fhat(xi)`` with an error estimate.

    The estimate covers the series truncation and, for ``n > 2``, the
    saddle-point envelope ``2 exp(-gamma_sp xi**q)``.
    """
    n = _check_n(n)
    xi = _check_positive(abs(xi), "xi")
    value, err = _truncated_series(n, xi)
    if n > 2.0:
        err += 2.0 * math.exp(-saddle_rate(n) * xi ** conjugate_exponent(n))
    return value, err


@lru_cache(maxsize=None)
def switch_point(n: float, tol: float) -> float:
    """Smallest ``xi`` (on a 0.25 ladder, at least 1) where the asymptotic form is within ``tol``."""
    xi = 1.0
    while xi < 1e3:
        if asymptotic_transform(n, xi)[1] <= tol:
            return xi
        xi += 0.25
    raise TruncationCapError(f"no asymptotic switch point below xi=1e3 for n={n}")


# ----------------------------------------------------------------- sums


def _truncation(cfg: ThetaConfig, cap: int) -> int:
    n, tau, tol = cfg.n, cfg.tau, cfg.tail_tol

    def bound(K):
        step = (K + 1.0) ** n - float(K) ** n
        return 2.0 * math.exp(-tau * float(K) ** n) / -math.expm1(-tau * step)

    K = max(0, int((math.log(2.0 / tol) / tau) ** (1.0 / n)) - 2)
    if K > cap:
        raise TruncationCapError(
            f"theta series for n={n}, tau={tau} needs about {K} terms (cap {cap})"
        )
    while bound(K) >= tol:
        K += 1
        if K > cap:
            raise TruncationCapError(f"theta series for n={n}, tau={tau} exceeds cap {cap}")
    return K


def theta_series(cfg: ThetaConfig, cap: int = DEFAULT_TERM_CAP) -> tuple[float, int]:
    """Direct lattice sum ``sum_{|k|<=K} exp(-tau |k|**n)``; returns ``(value, K)``."""
    K = _truncation(cfg, cap)
    if K == 0:
        return 1.0, 0
    k = np.arange(K, 0, -1, dtype=float)  # smallest terms first
    return 1.0 + 2.0 * math.fsum(np.exp(-cfg.tau * k**cfg.n)), K


def theta_minus_one(cfg: ThetaConfig, direct_cap: int = 1 << 16, quad: QuadConfig = DEFAULT_QUAD) -> float:
    """``Theta_n(tau) - 1`` without cancellation for moderate ``tau``.

    Falls back to the dual representation once the direct sum would need
    more than ``direct_cap`` terms.
    """
    try:
        K = _truncation(cfg, direct_cap)
    except TruncationCapError:
        return _dual(cfg, quad).value - 1.0
    if K == 0:
        return 0.0
    k = np.arange(K, 0, -1, dtype=float)
    return 2.0 * math.fsum(np.exp(-cfg.tau * k**cfg.n))


def _dual(cfg: ThetaConfig, quad: QuadConfig) -> DualSum:
    n, tol = cfg.n, cfg.tail_tol
    a = cfg.tau ** (-1.0 / n)
    if n == 2.0:
        total = 0.0
        m = 1
        while True:
            term = gaussian_transform(m * a)
            if term <= 1e-3 * tol / a or term == 0.0:
                break
            total += term
            m += 1
        return DualSum(a * (_SQRT_PI + 2.0 * total), m, 0.0, True)

    point_tol = 1e-3 * tol
    xi_sw = switch_point(n, point_tol)
    head = transform(n, 0.0, quad, analytic=False)
    total, err = 0.0, 0.0
    m = 1
    while m * a < xi_sw:
        r = transform(n, m * a, quad, analytic=False)
        total += r.value
        err += r.error_estimate
        m += 1
    notes = []
    tail, tail_err = _truncated_series(n, m * a, lambda p: a ** (-p) * zeta_tail(p, m))
    if n > 2.0:
        rate, q = saddle_rate(n), conjugate_exponent(n)
        k = m
        while True:
            b = 2.0 * math.exp(-rate * (k * a) ** q)
            tail_err += b
            if b <= 1e-6 * tail_err or b == 0.0:
                break
            k += 1
    if m > 1:
        notes.append(f"{m - 1} numeric transform terms below xi={xi_sw:g}")
    value = a * (head.value + 2.0 * (total + tail))
    error = a * (head.error_estimate + 2.0 * (err + tail_err))
    return DualSum(value, m, error, False, tuple(notes))


def dual_theta_sum(cfg: ThetaConfig, quad: QuadConfig = DEFAULT_QUAD) -> tuple[float, int]:
    """``tau**(-1/n) * sum_m fhat(m tau**(-1/n))``; returns ``(value, terms_used)``.

    Exact Gaussian ``fhat`` for ``n = 2``; otherwise numeric transforms up
    to the switch point and the asymptotic expansion summed in closed form
    beyond it.
    """
    d = _dual(cfg, quad)
    return d.value, d.terms


def poisson_residual(cfg: ThetaConfig, quad: QuadConfig = DEFAULT_QUAD) -> PoissonReport:
    primal, K = theta_series(cfg)
    d = _dual(cfg, quad)
    residual = abs(primal - d.value)
    budget = d.error + 2.0 * cfg.tail_tol + 4e-16 * abs(primal) * max(1, K)
    return PoissonReport(
        n=cfg.n,
        tau=cfg.tau,
        primal_sum=primal,
        dual_sum=d.value,
        residual=residual,
        primal_terms=K,
        dual_terms=d.terms,
        quad_error=d.error,
        analytic_fhat=d.analytic,
        error_budget=budget,
    )


def jacobi_residual(tau: float, tail_tol: float = DEFAULT_TAIL_TOL, quad: QuadConfig = DEFAULT_QUAD) -> float:
    """``|Theta_2(tau) - sqrt(pi/tau) Theta_2(pi**2/tau)|``, both by direct summation."""
    tau = _check_positive(tau, "tau")
    left, _ = theta_series(ThetaConfig(2.0, tau, tail_tol))
    right, _ = theta_series(ThetaConfig(2.0, math.pi**2 / tau, tail_tol))
    return abs(left - math.sqrt(math.pi / tau) * right)


# -------------------------------------------------------------- profile


def default_xi_max(n: float) -> float:
    return 3.0 if float(n) == 2.0 else 5.0


def sample_transform(n: float, xi_max: float, sample_count: int, quad: QuadConfig = PROFILE_QUAD):
    """Uniform grid on ``[0, xi_max]`` and ``fhat`` values there."""
    n = _check_n(n)
    xi_max = _check_positive(xi_max, "xi_max")
    if int(sample_count) != sample_count or sample_count < 16:
        raise DomainError(f"sample_count must be an integer >= 16, got {sample_count!r}")
    xi = np.linspace(0.0, xi_max, int(sample_count))
    if n == 2.0:
        return xi, gaussian_transform(xi), True
    values = np.array([transform(n, float(x), quad, analytic=False).value for x in xi])
    return xi, values, False


def _envelope(xi: np.ndarray, fhat: np.ndarray):
    window = xi >= 0.5 * xi[-1]
    xs, fs = xi[window], fhat[window]
    mag = np.abs(fs)
    if np.any(fs[:-1] * fs[1:] < 0.0):
        peak = (mag[1:-1] > mag[:-2]) & (mag[1:-1] >= mag[2:])
        idx = np.nonzero(peak)[0] + 1
        return xs[idx], mag[idx], "local_maxima"
    return xs, mag, "absolute_value"


def spectral_profile(
    n: float,
    xi_max: float | None = None,
    sample_count: int = DEFAULT_SAMPLES,
    quad: QuadConfig = PROFILE_QUAD,
) -> SpectralProfile:
    """Measure the decay law ``|fhat| ~ C exp(-gamma xi**q)``.

    The envelope in the upper half of the grid is the set of local maxima
    of ``|fhat|`` when ``fhat`` changes sign there, otherwise ``|fhat|``
    itself.  ``ln(-ln env)`` is regressed on ``ln xi``: the slope is
    ``q_hat`` and ``exp(intercept)`` is ``gamma_hat``.

    Raises
    ------
    InsufficientEnvelope
        Fewer than five usable envelope points in the window.
    """
    if xi_max is None:
        xi_max = default_xi_max(n)
    xi, fhat, analytic = sample_transform(n, xi_max, sample_count, quad)
    ex, ev, kind = _envelope(xi, fhat)
    usable = (ev > 0.0) & (ev < 1.0) & np.isfinite(ev)
    ex, ev = ex[usable], ev[usable]
    if ex.size < 5:
        raise InsufficientEnvelope(
            f"only {ex.size} envelope points in [{0.5 * xi_max:g}, {xi_max:g}]; increase xi_max"
        )
    X = np.log(ex)
    Y = np.log(-np.log(ev))
    slope, intercept = np.polyfit(X, Y, 1)
    fit = slope * X + intercept
    rms = float(np.sqrt(np.mean((Y - fit) ** 2)))
    return SpectralProfile(
        n=float(n),
        xi_samples=tuple(zip(xi.tolist(), fhat.tolist())),
        envelope_points=tuple(zip(ex.tolist(), ev.tolist())),
        q_hat=float(slope),
        gamma_hat=float(math.exp(intercept)),
        fit_residual=rms,
        envelope_kind=kind,
        analytic_fhat=analytic,
    )


def _golden_min(f, lo: float, hi: float, iters: int = 200) -> float:
    g = (math.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if hi - lo <= 1e-15 * max(1.0, abs(lo)):
            break
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = f(d)
    return 0.5 * (lo + hi)


def gaussian_shape_residual(
    n: float,
    xi_max: float | None = None,
    sample_count: int = 256,
    quad: QuadConfig = PROFILE_QUAD,
) -> float:
    """Relative L2 distance of sampled ``fhat`` from its best-fit ``A exp(-B xi**2)``.

    ``A`` is solved in closed form for each ``B``; ``B`` is refined by a
    golden-section search around a log-linear first guess.
    """
    if xi_max is None:
        xi_max = default_xi_max(n)
    xi, f, _ = sample_transform(n, xi_max, sample_count, quad)
    norm = float(np.sqrt(np.sum(f * f)))
    x2 = xi * xi

    def misfit(B):
        g = np.exp(-B * x2)
        A = float(np.dot(f, g) / np.dot(g, g))
        return float(np.sqrt(np.sum((f - A * g) ** 2))) / norm

    pos = f > 0.0
    w = f[pos] ** 2
    B0 = -np.polyfit(x2[pos], np.log(f[pos]), 1, w=np.sqrt(w))[0]
    B0 = float(B0) if B0 > 0 else 1.0
    lnB = _golden_min(lambda t: misfit(math.exp(t)), math.log(B0) - 1.5, math.log(B0) + 1.5)
    return min(misfit(B0), misfit(math.exp(lnB)))


# ------------------------------------------------------- Beckner ratios


def beckner_bound(p: float) -> float:
    p = _check_p(p)
    pp = p / (p - 1.0)
    return math.sqrt(p ** (1.0 / p) / pp ** (1.0 / pp))


def _check_p(p: float) -> float:
    p = float(p)
    if not 1.0 < p <= 2.0:
        raise DomainError(f"p must lie in (1, 2], got {p!r}")
    return p


def kernel_lp_norm(n: float, p: float) -> float:
    """``||exp(-|x|**n)||_p = ((2/n) Gamma(1/n))**(1/p) p**(-1/(n p))``."""
    n = _check_n(n)
    p = float(p)
    return math.exp((math.log(2.0 / n) + log_gamma(1.0 / n)) / p) * p ** (-1.0 / (n * p))


_HY_PANEL = 0.125
_HY_ORDER = 20


@lru_cache(maxsize=None)
def _hy_samples(n: float, quad: QuadConfig):
    """Gauss-Legendre nodes on ``[0, Xi]`` with ``fhat`` there, cached per ``n``."""
    if n == 2.0:
        Xi = math.sqrt(math.log(1e40) / math.pi**2)
    elif _is_even_integer(n):
        Xi = switch_point(n, 1e-14)
    else:
        Xi = switch_point(n, 1e-13)
    count = max(1, math.ceil(Xi / _HY_PANEL))
    edges = np.linspace(0.0, Xi, count + 1)
    x, w = np.polynomial.legendre.leggauss(_HY_ORDER)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * x).ravel()
    weights = (half[:, None] * w).ravel()
    if n == 2.0:
        values = gaussian_transform(nodes)
    else:
        values = np.array([transform(n, float(t), quad, analytic=False).value for t in nodes])
    return Xi, nodes, weights, values


def hy_ratio(n: float, p: float, quad: QuadConfig = PROFILE_QUAD) -> tuple[float, float]:
    """``||fhat||_{p'} / ||f||_p`` for ``f = exp(-|x|**n)`` and the sharp constant.

    Returns ``(ratio, beckner_bound)``.  The transform norm is a
    Gauss-Legendre sum over sampled ``fhat`` up to the asymptotic switch
    point plus the algebraic tail integrated beyond it.
    """
    n = _check_n(n)
    p = _check_p(p)
    pp = p / (p - 1.0)
    Xi, _, weights, values = _hy_samples(n, quad)
    head = float(np.dot(weights, np.abs(values) ** pp))
    tail = 0.0
    if n != 2.0 and not _is_even_integer(n):

        def tail_integrand(t):
            t = np.atleast_1d(t)
            return np.array([abs(_truncated_series(n, float(v))[0]) ** pp for v in t])

        try:
            tail = integrate_halfline(tail_integrand, quad, lower=Xi).value
        except NonConvergence as exc:
            tail = exc.result.value
    norm_hat = (2.0 * (head + tail)) ** (1.0 / pp)
    return norm_hat / kernel_lp_norm(n, p), beckner_bound(p)
