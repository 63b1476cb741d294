import re
from fractions import Fraction
from numbers import Rational
from typing import Any

import sympy as sp

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def to_fraction(value: Any) -> Fraction:
    """
    Exact rational from int / Fraction / sympy Rational / "num/den" string.
    Floats are rejected: they would round silently.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not a rational 'num/den' string: {value!r}")
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {value!r}") from None
    raise TypeError(f"expected an exact rational, got {type(value).__name__}: {value!r}")


def fmt(value: Fraction) -> str:
    return str(value)


def sign(value) -> int:
    return (value > 0) - (value < 0)
