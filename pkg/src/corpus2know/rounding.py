"""Exact percentages with a configurable display rounding mode."""

from decimal import Decimal
from fractions import Fraction
import math

ROUNDING_MODES = ("half-up", "floor", "ceiling")


def as_fraction(num, den=None):
    if den is None:
        return Fraction(num)
    if den == 0:
        raise ZeroDivisionError("ratio with zero denominator")
    return Fraction(num, den)


def round_percent(value, mode="half-up", digits=0):
    """Render ``value`` (a ratio in [0, 1]) as a percentage rounded to ``digits``
    decimal places.  Rounding happens on the exact rational, never on a float."""
    if mode not in ROUNDING_MODES:
        raise ValueError(f"unknown rounding mode {mode!r}; expected one of {ROUNDING_MODES}")
    scaled = Fraction(value) * 100 * 10 ** digits
    if mode == "floor":
        n = math.floor(scaled)
    elif mode == "ceiling":
        n = math.ceil(scaled)
    else:
        n = math.floor(scaled + Fraction(1, 2))
    return Decimal(n).scaleb(-digits)


def format_percent(value, mode="half-up", digits=0):
    return f"{round_percent(value, mode, digits)}%"


def fraction_str(value):
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"
