"""Exact rational scalars: parsing, formatting, shared constants.

Every coordinate, side length, area and charge in this package is a
`fractions.Fraction`.  Floats never enter the pipeline: contact and
tie-breaking decisions are equality-sensitive, so a single rounding error
would corrupt them.
"""

from __future__ import annotations

from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


class ScalarParseError(ValueError):
    """A token could not be read as an exact rational."""


def scalar(value: int | str | Fraction) -> Fraction:
    """Coerce an int, a ``p/q`` string or a finite decimal string to Fraction.

    Floats are rejected on purpose; they carry binary rounding that an exact
    pipeline must never absorb.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ScalarParseError(f"not a scalar: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ScalarParseError("empty scalar token")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ScalarParseError(f"bad scalar token {text!r}: {exc}") from exc
    raise ScalarParseError(f"not a scalar: {value!r}")


def format_scalar(x: Fraction) -> str:
    """Serialize as ``p/q`` with the denominator always present."""
    return f"{x.numerator}/{x.denominator}"
