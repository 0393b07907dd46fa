"""Log-gamma and the real zeta function, written without scipy.

Both use asymptotic expansions with fixed coefficient tables:
Stirling's series after shifting the argument upward for ``log_gamma``
and Euler-Maclaurin summation for ``zeta_real`` / ``zeta_tail``.
"""

from __future__ import annotations

import math

from ..errors import DomainError

# B_2k / (2k (2k - 1)), k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_STIRLING_MIN_X = 12.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# B_2k / (2k)!, k = 1..10
_BERNOULLI_OVER_FACTORIAL = tuple(
    b / math.factorial(2 * k)
    for k, b in enumerate(
        (
            1.0 / 6.0,
            -1.0 / 30.0,
            1.0 / 42.0,
            -1.0 / 30.0,
            5.0 / 66.0,
            -691.0 / 2730.0,
            7.0 / 6.0,
            -3617.0 / 510.0,
            43867.0 / 798.0,
            -174611.0 / 330.0,
        ),
        start=1,
    )
)
_EM_START = 16


def log_gamma(x: float) -> float:
    """Natural log of the gamma function for real ``x > 0``.

    The argument is shifted to ``x + k >= 12`` with the recurrence
    ``Gamma(x + 1) = x Gamma(x)`` and Stirling's series with eight
    correction terms is evaluated there.  Absolute error is below 1e-13
    on [0.05, 50].

    Raises
    ------
    DomainError
        If ``x <= 0`` or ``x`` is NaN.
    """
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x!r}")
    if math.isinf(x):
        return math.inf
    shift = 0.0
    if x < _STIRLING_MIN_X:
        k = math.ceil(_STIRLING_MIN_X - x)
        prod = 1.0
        for i in range(k):
            prod *= x + i
        shift = math.log(prod)
        x = x + k
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv
    for c in _STIRLING:
        series += c * power
        power *= inv2
    return (x - 0.5) * math.log(x) - x + _HALF_LOG_2PI + series - shift


def gamma(x: float) -> float:
    return math.exp(log_gamma(x))


def zeta_tail(s: float, start: int) -> float:
    """Return ``sum_{m >= start} m**-s`` for real ``s > 1``.

    Terms below ``max(start, 16)`` are summed directly; the remainder uses
    the Euler-Maclaurin formula with ten Bernoulli corrections.
    """
    s = float(s)
    if not s > 1.0:
        raise DomainError(f"zeta requires s > 1, got {s!r}")
    start = int(start)
    if start < 1:
        raise DomainError(f"zeta_tail requires start >= 1, got {start}")
    N = max(start, _EM_START)
    head = math.fsum(m ** -s for m in range(start, N))
    # integral + half endpoint + sum_k B_2k/(2k)! (s)_{2k-1} N^{-s-2k+1}
    tail = N ** (1.0 - s) / (s - 1.0) + 0.5 * N ** -s
    rising = s  # (s)_1
    power = N ** (-s - 1.0)
    for k, coef in enumerate(_BERNOULLI_OVER_FACTORIAL, start=1):
        term = coef * rising * power
        tail += term
        if abs(term) < 1e-18 * abs(tail):
            break
        rising *= (s + 2 * k - 1) * (s + 2 * k)
        power /= N * N
    return head + tail


def zeta_real(s: float) -> float:
    """Riemann zeta at real ``s > 1`` (absolute error well below 1e-12)."""
    return zeta_tail(s, 1)


def duplication_residual(s: float) -> float:
    """``|Gamma(s) - 2**(s-1) Gamma(s/2) Gamma((s+1)/2) / sqrt(pi)|``.

    Both sides are formed in log space and compared through ``expm1`` so the
    difference does not lose digits to cancellation.
    """
    s = float(s)
    if not s > 0.0:
        raise DomainError(f"duplication_residual requires s > 0, got {s!r}")
    lhs = log_gamma(s)
    rhs = (
        (s - 1.0) * math.log(2.0)
        + log_gamma(0.5 * s)
        + log_gamma(0.5 * (s + 1.0))
        - 0.5 * math.log(math.pi)
    )
    return math.exp(lhs) * abs(math.expm1(rhs - lhs))
