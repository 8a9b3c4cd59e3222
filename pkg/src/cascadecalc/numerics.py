"""Exact probability arithmetic and the display-rounding rules used everywhere.

Products and sums of probabilities are carried out in exact rational arithmetic
over the decimal value the caller wrote (``0.02`` means two hundredths, not the
nearest binary double). This buys three things at negligible cost for the small
models involved:

- joint odds are identical under any permutation of the factors,
- tail sums like 0.40 + 0.06 + 0.02 come out as exactly 0.48,
- no underflow for pathological models with dozens of tiny factors.

Display rounding is half-away-from-zero, one decimal place for percentages and
one significant figure for order-of-magnitude quantities (so 2.5 renders as
"3E+00", not the banker's-rounded "2E+00").
"""

from __future__ import annotations

import math
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterable

from .errors import ValidationError


def as_rational(x: float) -> Fraction:
    """Exact rational for the shortest decimal spelling of *x*."""
    return Fraction(Decimal(repr(float(x))))


def exact_product(values: Iterable[float]) -> float:
    """Product of *values*, exact until the single final rounding to float."""
    acc = Fraction(1)
    for v in values:
        acc *= as_rational(v)
    return float(acc)


def exact_sum(values: Iterable[float]) -> float:
    """Sum of *values*, exact until the single final rounding to float."""
    acc = Fraction(0)
    for v in values:
        acc += as_rational(v)
    return float(acc)


def exact_dot(a: Iterable[float], b: Iterable[float]) -> float:
    acc = Fraction(0)
    for x, y in zip(a, b):
        acc += as_rational(x) * as_rational(y)
    return float(acc)


def check_probability(value: float, what: str = "probability") -> float:
    """Validate a unit-interval scalar; rejects NaN and out-of-range values."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{what} must be a number, got {value!r}") from None
    if not (0.0 <= value <= 1.0):
        raise ValidationError(f"{what} must lie in [0, 1], got {value!r}")
    return value


def check_positive(value: float, what: str = "value") -> float:
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{what} must be a number, got {value!r}") from None
    if not value > 0.0 or math.isinf(value):
        raise ValidationError(f"{what} must be a positive finite number, got {value!r}")
    return value


def format_percent(p: float, decimals: int = 1) -> str:
    """Percentage with half-away-from-zero rounding: 0.0039962 -> '0.4%'."""
    quantum = Decimal(1).scaleb(-decimals) if decimals > 0 else Decimal(1)
    q = (Decimal(repr(float(p))) * 100).quantize(quantum, rounding=ROUND_HALF_UP)
    return f"{q}%"


def format_sig1(x: float) -> str:
    """One-significant-figure scientific notation, half-away-from-zero.

    Matches order-of-magnitude table cells: 2.5 -> '3E+00', 9.5e7 -> '1E+08'.
    """
    if x == 0:
        return "0E+00"
    sign = "-" if x < 0 else ""
    d = Decimal(repr(abs(float(x)))).normalize()
    exponent = d.adjusted()
    mantissa = (d.scaleb(-exponent)).quantize(Decimal(1), rounding=ROUND_HALF_UP)
    if mantissa == 10:
        mantissa = Decimal(1)
        exponent += 1
    return f"{sign}{mantissa}E{exponent:+03d}"
