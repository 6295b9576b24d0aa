"""The four families of classes admitting three-tile glass-cut dissections.

Besides every trapezoid and parallelogram (family I), exactly three curves
inside the parameter triangle 0 < alpha < beta < 1 consist of 3-gc-self-affine
classes.  Each curve fixes beta as a function of alpha:

    II   beta^2 + beta/(a(1-a)) - 1/(a(1-a)) = 0
    III  beta^2 - (1-3a+a^2)/(1-a) * beta - a/(1-a) = 0
    IV   (a-a^2) beta^3 + (1-2a+2a^2) beta^2 + (-1+2a-4a^2+a^3) beta + a^2 = 0

II and III have closed-form roots; IV is a cubic with a unique root in
(alpha, 1), isolated by exact rational bisection.  Residuals evaluate the
defining polynomials exactly on rational inputs, so membership tests do not
inherit any tolerance from the root finding.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction

from .affine_types import AffineClass, GenericQuad, Parallelogram, Trapezoid
from .scalars import Scalar

BETA_TOL = 1e-12


class FamilyId(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


def _check_alpha(alpha: Scalar) -> None:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")


def family_residual(family: FamilyId, alpha: Scalar, beta: Scalar) -> Scalar:
    """Defining polynomial of the family evaluated at (alpha, beta).

    Exact over rational inputs; zero exactly on the family curve.  Family I
    is the trapezoid family and has no residual polynomial.
    """
    if not 0 < alpha < beta < 1:
        raise ValueError(f"need 0 < alpha < beta < 1, got {alpha!r}, {beta!r}")
    a, b = alpha, beta
    if family is FamilyId.II:
        return b * b + b / (a * (1 - a)) - 1 / (a * (1 - a))
    if family is FamilyId.III:
        return b * b - (1 - 3 * a + a * a) / (1 - a) * b - a / (1 - a)
    if family is FamilyId.IV:
        return _cubic(a, b)
    raise ValueError(f"family {family.value} has no residual polynomial")


def _cubic(a: Scalar, b: Scalar) -> Scalar:
    return (
        (a - a * a) * b * b * b
        + (1 - 2 * a + 2 * a * a) * b * b
        + (-1 + 2 * a - 4 * a * a + a * a * a) * b
        + a * a
    )


def family_beta(family: FamilyId, alpha: Scalar) -> float:
    """The unique beta in (alpha, 1) putting (alpha, beta) on the family curve.

    Closed forms for II and III; for IV, rational bisection of the cubic
    until both the bracket width and the residual drop below BETA_TOL.
    """
    _check_alpha(alpha)
    a = float(alpha)
    if family is FamilyId.II:
        disc = 1 + 4 * a - 4 * a * a
        assert disc > 0
        beta = (-1 + math.sqrt(disc)) / (2 * a * (1 - a))
    elif family is FamilyId.III:
        disc = 1 - 2 * a + 7 * a * a - 6 * a**3 + a**4
        assert disc > 0
        beta = (1 - 3 * a + a * a + math.sqrt(disc)) / (2 * (1 - a))
    elif family is FamilyId.IV:
        lo, hi = _iv_bracket(alpha)
        beta = float((lo + hi) / 2)
    else:
        raise ValueError(f"no beta function for family {family.value}")
    assert a < beta < 1
    return beta


def _iv_bracket(alpha: Scalar) -> tuple[Fraction, Fraction]:
    """Isolating rational bracket for the IV root, width below BETA_TOL."""
    a = Fraction(alpha)
    lo, hi = a, Fraction(1)
    # The cubic is -a(1-a)^4 at a, a(1-a)^2 at 1, and convex between, so
    # the sign change in the bracket is unique.
    assert _cubic(a, lo) < 0 < _cubic(a, hi)
    for _ in range(200):
        mid = (lo + hi) / 2
        r = _cubic(a, mid)
        if hi - lo < BETA_TOL and abs(r) < BETA_TOL:
            return lo, hi
        if r < 0:
            lo = mid
        else:
            hi = mid
    raise AssertionError("cubic bisection failed to converge")


def family_membership(cls: AffineClass, tol: float = 0.0) -> set[FamilyId]:
    """Families the class belongs to, by kind (I) or residual magnitude.

    Trapezoids and parallelograms form family I exactly.  A generic class
    is in II, III, or IV when the corresponding residual has magnitude at
    most tol; with rational parameters and tol 0 this is an exact test.
    """
    if isinstance(cls, (Trapezoid, Parallelogram)):
        return {FamilyId.I}
    assert isinstance(cls, GenericQuad)
    out = set()
    for family in (FamilyId.II, FamilyId.III, FamilyId.IV):
        if abs(family_residual(family, cls.alpha, cls.beta)) <= tol:
            out.add(family)
    return out
