"""Scalar values shared across the package.

Every quantity in the geometry layer is either an exact rational
(``fractions.Fraction``) or a float that arrived from user input or from a
numeric solver. Exact values flow through constructions unchanged so that
verification can run at tolerance zero; floats are tolerated everywhere but
carry their inexactness with them. Helpers here keep that distinction in one
place.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Scalar = Union[Fraction, int, float]


def is_exact(x: Scalar) -> bool:
    """True when x is an exact rational (Fraction or int), False for floats."""
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def exactify(x: Scalar) -> Fraction:
    """Fraction from an exact scalar. Refuses floats: converting would launder
    roundoff into 'exact' arithmetic."""
    if isinstance(x, float):
        raise TypeError(f"refusing to treat float {x!r} as exact")
    return Fraction(x)


def scalar_close(a: Scalar, b: Scalar, tol: Scalar = 0) -> bool:
    """|a - b| <= tol, exact when all three values are exact."""
    if is_exact(a) and is_exact(b) and is_exact(tol):
        return abs(Fraction(a) - Fraction(b)) <= Fraction(tol)
    return abs(float(a) - float(b)) <= float(tol)


def parse_scalar(text: str) -> Scalar:
    """Parse 'p/q' or an integer as Fraction, anything else as float.

    CLI entry point for numbers: '2/3' -> Fraction(2,3), '4' -> Fraction(4),
    '0.75' -> 0.75 (float, inexact on purpose).
    """
    s = text.strip()
    try:
        return Fraction(s) if ("/" in s or s.lstrip("+-").isdigit()) else float(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc


def scalar_to_json(x: Scalar) -> object:
    """JSON form: exact -> 'p/q' string, float -> {'dec': repr}."""
    if is_exact(x):
        f = Fraction(x)
        return f"{f.numerator}/{f.denominator}"
    return {"dec": repr(float(x))}


def scalar_from_json(obj: object) -> Scalar:
    """Inverse of scalar_to_json."""
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, dict) and set(obj) >= {"dec"}:
        return float(obj["dec"])
    if isinstance(obj, int):
        return Fraction(obj)
    raise ValueError(f"bad scalar encoding: {obj!r}")
