"""Certified continued fractions, Dirichlet approximants and irrationality probes.

Every real is handled as an exact rational interval; a partial quotient is
emitted only when both endpoints agree on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
from typing import Any, Union

import mpmath
from mpmath import mp, mpf
import pandas as pd

from .bounds import log_gap_lower
from .errors import InsufficientPrecision, InvalidParams, RationalDetected, ZeroInterval
from .precision import GUARD_BITS, Ball, fraction_to_mpf, to_fraction

DEFAULT_BITS = 128
MAX_TERMS = 10_000

RealLike = Union[Ball, Fraction, mpf, int]


def interval_of(alpha: RealLike) -> tuple[Fraction, Fraction]:
    if isinstance(alpha, Ball):
        return alpha.bounds()
    if isinstance(alpha, Fraction):
        return alpha, alpha
    if isinstance(alpha, int):
        return Fraction(alpha), Fraction(alpha)
    exact = to_fraction(mpf(alpha))
    return exact, exact


@dataclass(frozen=True)
class CFExpansion:
    partial_quotients: tuple[int, ...]
    certified_depth: int
    terminated: bool

    def convergents(self) -> list[tuple[int, int]]:
        p_prev, p = 0, 1
        q_prev, q = 1, 0
        out = []
        for a in self.partial_quotients:
            p_prev, p = p, a * p + p_prev
            q_prev, q = q, a * q + q_prev
            out.append((p, q))
        return out


@dataclass(frozen=True)
class RationalApproximant:
    r: int
    s: int
    gap: Ball
    N: int

    def as_row(self) -> dict[str, Any]:
        with mp.workprec(DEFAULT_BITS):
            scaled = self.gap.center * self.s * self.N
        return {
            "s": self.s,
            "r": self.r,
            "gap": mpmath.nstr(self.gap.center, 20),
            "gap_s_N": mpmath.nstr(scaled, 12),
        }


@dataclass(frozen=True)
class LargeDenominatorReport:
    s: int
    lower_bound: mpf
    satisfied: bool


def continued_fraction(
    alpha: RealLike, max_terms: int = MAX_TERMS, stop_denominator: int | None = None
) -> CFExpansion:
    """Quotients certified by the interval of ``alpha``.

    With ``stop_denominator`` the expansion ends after the first convergent
    whose denominator exceeds it.
    """
    lo, hi = interval_of(alpha)
    if lo > hi:
        raise InvalidParams("Empty interval.")
    quotients: list[int] = []
    q_prev, q = 1, 0
    terminated = False
    while len(quotients) < max_terms:
        a = math.floor(lo)
        if a != math.floor(hi):
            break
        quotients.append(a)
        q_prev, q = q, a * q + q_prev
        lo, hi = lo - a, hi - a
        if hi == 0:
            terminated = True
            break
        if lo <= 0:
            break
        if stop_denominator is not None and q > stop_denominator:
            break
        lo, hi = 1 / hi, 1 / lo
    if not quotients:
        raise ZeroInterval("The error radius is too large to determine the integer part.")
    return CFExpansion(tuple(quotients), len(quotients), terminated)


def _gap(alpha: RealLike, r: int, s: int, bits: int) -> Ball:
    lo, hi = interval_of(alpha)
    target = Fraction(r, s)
    ends = sorted((abs(lo - target), abs(hi - target)))
    gap_lo = Fraction(0) if lo <= target <= hi else ends[0]
    gap_hi = ends[1]
    with mp.workprec(bits + GUARD_BITS):
        center = fraction_to_mpf((gap_lo + gap_hi) / 2)
        radius = fraction_to_mpf((gap_hi - gap_lo) / 2) + abs(center) * mpmath.ldexp(1, -bits)
    return Ball(center, radius)


def dirichlet_approximant(alpha: RealLike, N: int, bits: int = DEFAULT_BITS) -> RationalApproximant:
    """Last convergent r/s with s ≤ N; certified |α − r/s| ≤ 1/(sN)."""
    if N < 2:
        raise InvalidParams("N must be at least 2.")
    cf = continued_fraction(alpha, stop_denominator=N)
    if cf.terminated:
        raise RationalDetected(f"α is rational: {list(cf.partial_quotients)}.")
    convergents = cf.convergents()
    if convergents[-1][1] <= N:
        raise InsufficientPrecision(
            f"Certified depth {cf.certified_depth} reaches denominator {convergents[-1][1]} ≤ N = {N}."
        )
    r, s = next((p, q) for p, q in reversed(convergents) if q <= N)
    if math.gcd(r, s) != 1:
        raise ArithmeticError(f"Convergent {r}/{s} is not reduced.")

    gap = _gap(alpha, r, s, bits)
    lo, hi = interval_of(alpha)
    target = Fraction(r, s)
    worst = max(abs(lo - target), abs(hi - target))
    if worst > Fraction(1, s * N):
        raise InsufficientPrecision(f"Gap for {r}/{s} cannot be certified ≤ 1/(sN).")
    return RationalApproximant(r, s, gap, N)


def large_denominator_check(alpha: RealLike, N: int, kappa: Any) -> LargeDenominatorReport:
    """Compare the Dirichlet denominator with ½(N/2π)^{1/κ}."""
    with mp.workprec(DEFAULT_BITS):
        k = mpf(kappa)
        if k <= 0:
            raise InvalidParams("κ must be positive.")
        approximant = dirichlet_approximant(alpha, N)
        lower = (mpf(N) / (2 * mpmath.pi)) ** (1 / k) / 2
    return LargeDenominatorReport(approximant.s, lower, approximant.s > lower)


def _convergents_up_to(alpha: RealLike, s_max: int) -> list[tuple[int, int]]:
    if s_max < 1:
        raise InvalidParams("s_max must be positive.")
    cf = continued_fraction(alpha, stop_denominator=s_max)
    if cf.terminated:
        raise RationalDetected(f"α is rational: {list(cf.partial_quotients)}.")
    convergents = cf.convergents()
    if convergents[-1][1] < s_max:
        raise InsufficientPrecision(
            f"Certified expansion stops at denominator {convergents[-1][1]} < s_max = {s_max}."
        )
    return [(p, q) for p, q in convergents if q <= s_max]


def irrationality_probe(alpha: RealLike, s_max: int, bits: int = DEFAULT_BITS) -> pd.DataFrame:
    """Per convergent: e_k = −log|α − r/s| / log s and its running maximum."""
    rows = []
    running = None
    for r, s in _convergents_up_to(alpha, s_max):
        gap = _gap(alpha, r, s, bits)
        with mp.workprec(bits):
            exponent = -mpmath.log(gap.center) / mpmath.log(s) if s > 1 else None
            gap_s = gap.center * s
        if exponent is not None:
            running = exponent if running is None else max(running, exponent)
        rows.append(
            {
                "s": s,
                "r": r,
                "gap": mpmath.nstr(gap.center, 20),
                "gap_s": mpmath.nstr(gap_s, 12),
                "exponent": "" if exponent is None else mpmath.nstr(exponent, 12),
                "running_max": "" if running is None else mpmath.nstr(running, 12),
            }
        )
    return pd.DataFrame(rows, columns=["s", "r", "gap", "gap_s", "exponent", "running_max"])


def arg_approximation_check(alpha: RealLike, s_max: int, kappa: Any, bits: int = DEFAULT_BITS) -> pd.DataFrame:
    """Check |α − r/s| ≥ 1/(π(2s)^{1+κ}) for every convergent, in log space."""
    if mpf(kappa) <= 0:
        raise InvalidParams("κ must be positive.")
    rows = []
    for r, s in _convergents_up_to(alpha, s_max):
        gap = _gap(alpha, r, s, bits)
        with mp.workprec(bits):
            log_gap = mpmath.log(gap.center - gap.radius)
            log_bound = log_gap_lower(s, kappa, bits)
        rows.append(
            {
                "s": s,
                "r": r,
                "log_gap": mpmath.nstr(log_gap, 15),
                "log_bound": mpmath.nstr(log_bound, 15),
                "satisfied": bool(log_gap >= log_bound),
            }
        )
    return pd.DataFrame(rows, columns=["s", "r", "log_gap", "log_bound", "satisfied"])
