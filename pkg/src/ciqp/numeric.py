"""Exact integer/rational helpers.

Integers are plain Python ``int`` and rationals are :class:`fractions.Fraction`;
both are arbitrary precision and already canonical, so this module only adds
what the stdlib lacks: an exact ceiling square root and the text encoding used
by the instance and report files.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction

__all__ = ["Rational", "ceil_sqrt", "as_rational", "parse_rational", "format_rational"]


def ceil_sqrt(x) -> int:
    """Smallest nonnegative integer ``g`` with ``g*g >= x``.

    ``x`` may be an ``int`` or a ``Fraction``. No floating point is involved:
    since ``g*g`` is an integer, ``g*g >= x`` iff ``g*g >= ceil(x)``.
    """
    x = as_rational(x)
    if x < 0:
        raise ValueError(f"ceil_sqrt of negative value {x}")
    n = -((-x.numerator) // x.denominator)  # ceil(x)
    if n == 0:
        return 0
    return math.isqrt(n - 1) + 1


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and exact strings to a Fraction; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def parse_rational(text: str) -> Fraction:
    """Parse ``"num/den"``, an integer, or a finite decimal (``"0.1"``, ``"1e-2"``) exactly."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    try:
        value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc
    return value


def format_rational(value) -> str:
    """Render as ``"num/den"``, always with an explicit denominator (``-9`` -> ``"-9/1"``)."""
    value = as_rational(value)
    return f"{value.numerator}/{value.denominator}"
