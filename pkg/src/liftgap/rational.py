"""Exact rational values and their "p/q" wire format.

Every quantity the verifiers touch is a :class:`fractions.Fraction`; floats
never enter a verification path.  Serialized rationals are canonical
lowest-terms strings: ``"p/q"``, or just ``"p"`` when the denominator is 1.
"""

from __future__ import annotations

import decimal
from fractions import Fraction


def parse_rational(text: str) -> Fraction:
    """Parse a ``"p/q"`` (or plain integer) string into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid rational literal: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    """Canonical lowest-terms rendering of a rational."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decimal_string(value: Fraction, digits: int = 20) -> str:
    """Display-only decimal rendering (round-half-even, `digits` significant).

    Reports store exact rationals as the truth; this is for human eyes.
    """
    value = Fraction(value)
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = decimal.ROUND_HALF_EVEN
        quotient = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
    return str(quotient)
