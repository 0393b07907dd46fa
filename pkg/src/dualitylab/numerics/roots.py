from __future__ import annotations

import math
from typing import Callable

from ..errors import BadBracket, EvaluationError


def _eval(g, x):
    y = float(g(x))
    if not math.isfinite(y):
        raise EvaluationError(f"root target returned {y!r} at x={x!r}")
    return y


def find_root_bracketed(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 0.0,
    max_iter: int = 400,
) -> float:
    """Root of a continuous, monotone ``g`` inside ``[lo, hi]``.

    Secant (false-position) steps are taken while they shrink the bracket
    by at least half; otherwise the next step is a plain bisection.  Stops
    when the bracket is no wider than ``tol`` (``tol=0`` means "until the
    bracket cannot shrink in floating point") and returns the bracket end
    with the smaller ``|g|``.

    Raises
    ------
    BadBracket
        If ``g(lo)`` and ``g(hi)`` have the same strict sign.
    """
    a, b = float(lo), float(hi)
    if a > b:
        a, b = b, a
    fa, fb = _eval(g, a), _eval(g, b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise BadBracket(f"g({a!r})={fa:.3g} and g({b!r})={fb:.3g} have the same sign")

    use_secant = True
    for _ in range(max_iter):
        width = b - a
        if width <= tol:
            break
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        x = mid
        if use_secant:
            x = b - fb * (b - a) / (fb - fa)
            if not a < x < b:
                x = mid
        fx = _eval(g, x)
        if fx == 0.0:
            return x
        if fa * fx < 0.0:
            b, fb = x, fx
        else:
            a, fa = x, fx
        # non-contraction: the step must at least halve the bracket
        use_secant = (b - a) <= 0.5 * width
    return a if abs(fa) <= abs(fb) else b
