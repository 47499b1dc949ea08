"""Multiprecision reals with explicit error radii."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
import re

import mpmath
from mpmath import mp, mpf

from .errors import InvalidParams

GUARD_BITS = 32


def to_fraction(x: mpf) -> Fraction:
    """Exact rational value of a binary floating-point number."""
    man, exp = mpf(x).man_exp
    if exp >= 0:
        return Fraction(int(man) << exp)
    return Fraction(int(man), 1 << -exp)


def fraction_to_mpf(value: Fraction) -> mpf:
    return mpf(value.numerator) / value.denominator


def decimal_digits(bits: int) -> int:
    return int(bits * math.log10(2)) + 1


def nstr(x: mpf, bits: int) -> str:
    return mpmath.nstr(x, decimal_digits(bits), min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


@dataclass(frozen=True)
class Ball:
    """Real number known to lie in ``[center - radius, center + radius]``."""

    center: mpf
    radius: mpf

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise InvalidParams("Ball radius must be non-negative.")

    def bounds(self) -> tuple[Fraction, Fraction]:
        c, r = to_fraction(self.center), to_fraction(self.radius)
        return c - r, c + r

    def contains(self, value: Fraction) -> bool:
        lo, hi = self.bounds()
        return lo <= value <= hi


def parse_real(text: str, precision_bits: int) -> Ball | Fraction:
    """Parse ``"a/b"`` exactly or a decimal string as a ball of half-unit radius."""
    text = text.strip()
    if re.fullmatch(r"[+-]?\d+/\d+", text):
        value = Fraction(text)
        if value.denominator == 0:
            raise InvalidParams(f"Zero denominator in {text!r}.")
        return value
    match = re.fullmatch(r"[+-]?(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?", text)
    if not match or not (match.group(1) or match.group(2)):
        raise InvalidParams(f"Cannot parse real number {text!r}.")
    exact = Fraction(text)
    places = len(match.group(2) or "") - int(match.group(3) or 0)
    with mp.workprec(precision_bits + GUARD_BITS):
        center = fraction_to_mpf(exact)
        radius = mpf(10) ** (-places) / 2 + abs(center) * mpmath.ldexp(1, -precision_bits)
    return Ball(center, radius)
