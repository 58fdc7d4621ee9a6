"""Exact rational scalars.

All arithmetic in the package runs over ``gmpy2.mpq``; it is always kept in
lowest terms with a positive denominator, and it compares and hashes equal
to :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

from gmpy2 import mpq

Rational = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)


def qq(value) -> Rational:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``Fraction``/``mpq`` instances and strings of the form
    ``"p"`` or ``"p/q"``. Floats are refused: they would silently inject
    rounding error into exact computations.
    """
    if isinstance(value, Rational):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            return mpq(text)
        except ValueError as exc:
            raise ValueError(f"bad rational literal {value!r}") from exc
    if isinstance(value, (Fraction, _RationalABC)):
        return mpq(value.numerator, value.denominator)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def to_str(value) -> str:
    """Serialize as ``"p/q"``, dropping ``q`` when it is 1."""
    q = qq(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
