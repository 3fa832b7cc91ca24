"""Exact rational scalars and the exact-or-float scalar convention.

Every quantity in dimension one is kept as a :class:`fractions.Fraction`
(always reduced, positive denominator). Floats are accepted wherever a
scalar is, and any arithmetic touching a float produces a float; this is
plain Python numeric-tower behaviour, which the rest of the package relies on.
"""

from __future__ import annotations

import math
import numbers
import re
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[Fraction, float]

__all__ = [
    "Rational",
    "Scalar",
    "make_rational",
    "rat_cmp",
    "rat_to_float",
    "as_scalar",
    "is_exact",
    "all_exact",
    "common_denominator",
    "parse_scalar",
    "format_scalar",
]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)(?:\s*/\s*(\d+))?\s*$")


def make_rational(p: int, q: int) -> Fraction:
    """Return the reduced fraction ``p/q`` with a positive denominator."""
    if q == 0:
        raise ZeroDivisionError("rational with zero denominator")
    return Fraction(int(p), int(q))


def rat_cmp(a: Fraction, b: Fraction) -> int:
    """Three-way exact comparison: -1, 0 or 1."""
    # cross-multiplication on arbitrary precision ints, denominators are > 0
    lhs = a.numerator * b.denominator
    rhs = b.numerator * a.denominator
    return (lhs > rhs) - (lhs < rhs)


def rat_to_float(a: Fraction) -> float:
    # int / int true division is correctly rounded in CPython
    return a.numerator / a.denominator


def as_scalar(x) -> Scalar:
    """Coerce ints and Fractions to Fraction, floats (incl. numpy) to float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, str):
        return parse_scalar(x)
    return float(x)


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int)) and not isinstance(x, bool)


def all_exact(values: Iterable) -> bool:
    return all(is_exact(v) for v in values)


def common_denominator(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Rescale fractions to integers over their least common denominator.

    Returns ``(nums, den)`` with ``values[i] == nums[i] / den``. Summing the
    integers and dividing once is far cheaper than summing Fractions, whose
    intermediate denominators have to be re-reduced at every step.
    """
    if not values:
        return [], 1
    den = math.lcm(*(v.denominator for v in values))
    return [v.numerator * (den // v.denominator) for v in values], den


def parse_scalar(text: str) -> Scalar:
    """Parse ``"p/q"``, ``"p"`` (exact) or a decimal literal (float)."""
    m = _RATIONAL_RE.match(text)
    if m:
        num, den = m.group(1), m.group(2)
        return make_rational(int(num), int(den) if den is not None else 1)
    try:
        return float(text)
    except ValueError:
        raise ValueError(f"not a scalar: {text!r}") from None


def format_scalar(x: Scalar) -> str:
    """``p/q`` (or ``p`` for integers) when exact, 17 significant digits otherwise."""
    if is_exact(x):
        x = Fraction(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return f"{float(x):.17g}"
