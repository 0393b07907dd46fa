"""Integer lattices embedded through divergence level sets.

An integer ``A >= 1`` is placed at the natural parameter ``theta_A`` with
``D(theta_A || theta0) = A**n``.  On either side of the reference point the
divergence is strictly monotone and unbounded, so the level set has exactly
one point per side ("branch").  Distances between lattice points are
measured with the Fisher metric, and Pythagorean closure of a triple is
tested on the two-axis product manifold.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import BadBracket, DomainError, TooFewPoints
from .expfam import ProductPoint, _check_n, _check_theta, divergence, product_divergence
from .numerics import find_root_bracketed

DEFAULT_THETA0 = -1.0
DEFAULT_SOLVER_TOL = 1e-9
DEFAULT_CLOSURE_TOL = 1e-6
_MAX_BRACKET_STEPS = 2100


class Branch(str, enum.Enum):
    BELOW = "below_reference"
    ABOVE = "above_reference"

    @classmethod
    def parse(cls, value) -> "Branch":
        if isinstance(value, Branch):
            return value
        text = str(value).lower()
        aliases = {"below": cls.BELOW, "above": cls.ABOVE}
        if text in aliases:
            return aliases[text]
        return cls(text)


@dataclass(frozen=True)
class LatticePoint:
    k: int
    theta: float
    energy: float


@dataclass(frozen=True)
class LatticeEmbedding:
    n: float
    theta0: float
    branch: Branch
    points: tuple[LatticePoint, ...]

    @property
    def theta1(self) -> float:
        return self.points[0].theta


@dataclass(frozen=True)
class GapTable:
    n: float
    theta0: float
    # (k, theta_k, gap to k + 1)
    entries: tuple[tuple[int, float, float], ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class ClosureReport:
    n: float
    A: int
    B: int
    C: int
    theta0: float
    energy_sum: float
    target_energy: float
    defect: float
    theta_R_energy: float
    theta_A: float
    theta_B: float
    theta_C: float
    closed: bool


def _check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or int(value) != value or int(value) < 1:
        raise DomainError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def solve_level(n: float, theta0: float, energy: float, branch=Branch.BELOW, tol: float = DEFAULT_SOLVER_TOL) -> float:
    """Point on ``branch`` whose divergence from ``theta0`` equals ``energy``.

    The bracket is grown geometrically from ``theta0`` (doubling away from
    it below the reference, halving toward zero above it) until the
    divergence exceeds the target.  The result satisfies
    ``|D - energy| <= tol * max(1, energy)``.
    """
    n = _check_n(n)
    theta0 = _check_theta(theta0, "theta0")
    branch = Branch.parse(branch)
    energy = float(energy)
    if energy < 0 or not math.isfinite(energy):
        raise DomainError(f"target energy must be finite and >= 0, got {energy!r}")
    if energy == 0.0:
        return theta0

    def residual(theta):
        return divergence(n, theta, theta0) - energy

    near, far = theta0, theta0
    factor = 2.0 if branch is Branch.BELOW else 0.5
    for _ in range(_MAX_BRACKET_STEPS):
        far = near * factor
        if far == 0.0 or math.isinf(far):
            break
        if residual(far) >= 0.0:
            break
        near = far
    else:
        raise BadBracket("bracket expansion did not enclose the level set")
    if far == 0.0 or math.isinf(far):
        raise DomainError(
            f"level D = {energy!r} on branch {branch.value} lies outside double precision range"
        )
    theta = find_root_bracketed(residual, near, far, tol=0.0)
    miss = abs(residual(theta))
    # relative above unit energy: doubles near 1e9 are spaced ~1e-7 apart
    if miss > tol * max(1.0, energy):
        raise BadBracket(
            f"solver converged to theta={theta!r} with |D - E| = {miss:.3g} > tol={tol:.3g}"
        )
    return theta


def embed_integer(n: float, theta0: float, A: int, branch=Branch.BELOW, tol: float = DEFAULT_SOLVER_TOL) -> float:
    """``theta_A`` with ``D(theta_A || theta0) = A**n`` on the given branch."""
    A = _check_positive_int(A, "A")
    return solve_level(n, theta0, float(A) ** float(n), branch, tol)


def build_lattice(n: float, theta0: float = DEFAULT_THETA0, K: int = 1, branch=Branch.BELOW, tol: float = DEFAULT_SOLVER_TOL) -> LatticeEmbedding:
    K = _check_positive_int(K, "K")
    branch = Branch.parse(branch)
    points = tuple(
        LatticePoint(k, embed_integer(n, theta0, k, branch, tol), float(k) ** float(n))
        for k in range(1, K + 1)
    )
    return LatticeEmbedding(float(n), float(theta0), branch, points)


def riemannian_gap(n: float, theta_a: float, theta_b: float) -> float:
    """Fisher-metric length between two points, ``|ln(theta_b/theta_a)| / sqrt(n)``."""
    n = _check_n(n)
    theta_a = _check_theta(theta_a, "theta_a")
    theta_b = _check_theta(theta_b, "theta_b")
    return abs(math.log(theta_b / theta_a)) / math.sqrt(n)


def gap_table(emb: LatticeEmbedding) -> GapTable:
    if len(emb.points) < 2:
        raise TooFewPoints("a gap table needs at least two lattice points")
    entries = tuple(
        (p.k, p.theta, riemannian_gap(emb.n, p.theta, q.theta))
        for p, q in zip(emb.points, emb.points[1:])
    )
    return GapTable(emb.n, emb.theta0, entries)


def pythagoras_closure(
    n: float,
    theta0: float,
    A: int,
    B: int,
    C: int,
    tol: float = DEFAULT_CLOSURE_TOL,
    solver_tol: float = DEFAULT_SOLVER_TOL,
    branch=Branch.BELOW,
) -> ClosureReport:
    """Place ``A`` and ``B`` on orthogonal axes and compare the hypotenuse with ``C``.

    ``P = (theta_A, theta0)`` and ``R = (theta_A, theta_B)`` on the product
    manifold, origin ``O = (theta0, theta0)``.  The hypotenuse divergence
    ``D(R || O)`` equals ``A**n + B**n`` by additivity; the triple closes
    when that matches the energy ``C**n`` of the lattice point ``theta_C``.
    """
    n = _check_n(n)
    A = _check_positive_int(A, "A")
    B = _check_positive_int(B, "B")
    C = _check_positive_int(C, "C")
    theta_a = embed_integer(n, theta0, A, branch, solver_tol)
    theta_b = embed_integer(n, theta0, B, branch, solver_tol)
    theta_c = embed_integer(n, theta0, C, branch, solver_tol)
    origin = ProductPoint(n, theta0, theta0)
    r_point = ProductPoint(n, theta_a, theta_b)
    hypotenuse = product_divergence(n, r_point, origin)
    if float(n).is_integer():
        # exact integer arithmetic for the defect itself
        e = int(n)
        energy_sum = float(A**e + B**e)
        target = float(C**e)
        defect = float(A**e + B**e - C**e)
    else:
        energy_sum = A**n + B**n
        target = float(C) ** n
        defect = energy_sum - target
    return ClosureReport(
        n=n,
        A=A,
        B=B,
        C=C,
        theta0=float(theta0),
        energy_sum=energy_sum,
        target_energy=target,
        defect=defect,
        theta_R_energy=hypotenuse,
        theta_A=theta_a,
        theta_B=theta_b,
        theta_C=theta_c,
        closed=abs(defect) <= tol,
    )
