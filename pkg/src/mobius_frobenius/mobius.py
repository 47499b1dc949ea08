"""Möbius sieve, Mertens values and Möbius-weighted exponential sums.

Exponential sums reduce nα mod 1 exactly: α is held as a 128-bit fixed-point
fraction, the top 64 bits of frac(nα) are formed with uint64 limb arithmetic,
and cos/sin are evaluated in float64 after an exact octant reduction. Blocks of
2^16 terms are summed with ``math.fsum``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import logging
import math
from typing import Sequence, Union

import mpmath
from mpmath import mpf
import numpy as np
import pandas as pd

from .errors import BudgetExceeded, InvalidParams, PrecisionExhausted
from .parallel import map_chunks
from .precision import Ball, to_fraction
from .zeta import FrobeniusSpectrum

logger = logging.getLogger("mobius_frobenius")
if logger.level == logging.NOTSET:
    logger.setLevel(logging.INFO)

DEFAULT_SIEVE_BUDGET = 10**8
SEGMENT = 10**7
BLOCK = 1 << 16
MAX_N = (1 << 31) - 1

_U = 2.0**-53
# cos/sin of one reduced term: conversion, constant, product and libm rounding
TERM_EPS = 4 * _U
_FIXED_BITS = 128
_OCTANT_BITS = 61
_TURN_SCALE = 2 * math.pi / 2.0**64
_COS_SIGN = np.array([1, 1, -1, -1, -1, -1, 1, 1], dtype=np.float64)
_SIN_SIGN = np.array([1, 1, 1, 1, -1, -1, -1, -1], dtype=np.float64)
_SWAP = np.array([False, True, True, False, False, True, True, False])

AngleLike = Union[Ball, Fraction, mpf, float, int]


@dataclass(frozen=True, eq=False)
class MobiusTable:
    limit: int
    values: np.ndarray  # int8, index 0 unused
    mertens: np.ndarray | None = None

    def mu(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise InvalidParams(f"n = {n} outside 1..{self.limit}.")
        return int(self.values[n])

    def mertens_at(self, k: int) -> int:
        if not 0 <= k <= self.limit:
            raise InvalidParams(f"k = {k} outside 0..{self.limit}.")
        if self.mertens is not None:
            return int(self.mertens[k])
        return int(self.values[1 : k + 1].sum(dtype=np.int64))


@dataclass(frozen=True)
class MobiusSumResult:
    N: int
    value: Union[float, complex]
    error_bound: float
    bound_rhs: float | None
    method: str

    @property
    def ratio(self) -> float | None:
        if not self.bound_rhs:
            return None
        return abs(self.value) / self.bound_rhs

    def as_row(self) -> dict[str, object]:
        value = self.value.real if isinstance(self.value, complex) else self.value
        return {
            "N": self.N,
            "method": self.method,
            "value": repr(float(value)),
            "error_bound": f"{self.error_bound:.3e}",
            "bound_rhs": "" if self.bound_rhs is None else f"{self.bound_rhs:.6e}",
            "ratio": "" if self.ratio is None else f"{self.ratio:.6e}",
        }


def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i :: i] = False
    return np.flatnonzero(is_prime)


def _sieve_segment(lo: int, hi: int, primes: np.ndarray) -> np.ndarray:
    mu = np.ones(hi - lo, dtype=np.int8)
    rest = np.arange(lo, hi, dtype=np.int64)
    for p in primes:
        p = int(p)
        if p * p >= hi:
            break
        start = (-lo) % p
        mu[start::p] *= -1
        rest[start::p] //= p
        square = p * p
        mu[(-lo) % square :: square] = 0
    # one prime factor above √hi is left in rest
    mu[rest > 1] *= -1
    return mu


def sieve(N: int, budget: int = DEFAULT_SIEVE_BUDGET, with_mertens: bool = True) -> MobiusTable:
    """μ(1..N), segmented above 10^7."""
    if N < 1:
        raise InvalidParams("Sieve limit must be at least 1.")
    if N > budget:
        raise BudgetExceeded(f"Sieve limit {N} exceeds the budget of {budget}.")
    primes = _small_primes(math.isqrt(N) + 1)
    values = np.empty(N + 1, dtype=np.int8)
    for lo in range(0, N + 1, SEGMENT):
        hi = min(lo + SEGMENT, N + 1)
        values[lo:hi] = _sieve_segment(lo, hi, primes)
    values[0] = 0
    mertens = np.cumsum(values, dtype=np.int64) if with_mertens else None
    logger.info("Sieved μ up to %s.", N)
    return MobiusTable(N, values, mertens)


def _fixed_point(alpha: AngleLike) -> tuple[int, float]:
    """frac(α)·2^128 as an integer, and the total angle uncertainty in turns."""
    if isinstance(alpha, Ball):
        center, radius = to_fraction(alpha.center), float(alpha.radius)
    elif isinstance(alpha, Fraction):
        center, radius = alpha, 0.0
    elif isinstance(alpha, (int, np.integer)):
        center, radius = Fraction(int(alpha)), 0.0
    else:
        center, radius = to_fraction(mpf(alpha)), 0.0
    center -= math.floor(center)
    scaled = center * (1 << _FIXED_BITS)
    A = round(scaled) % (1 << _FIXED_BITS)
    return A, radius + 2.0 ** -(_FIXED_BITS + 1)


def _limbs(A: int) -> tuple[np.uint64, ...]:
    return tuple(np.uint64((A >> (32 * k)) & 0xFFFFFFFF) for k in range(4))


def _turns(limbs: tuple[np.uint64, ...], n: np.ndarray) -> np.ndarray:
    """Top 64 bits of frac(n·A/2^128) for n < 2^31."""
    a0, a1, a2, a3 = limbs
    shift = np.uint64(32)
    t0, t1, t2, t3 = n * a0, n * a1, n * a2, n * a3
    carry = (t1 + (t0 >> shift)) >> shift
    return t2 + (t3 << shift) + carry


def _cos_sin(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of 2π·h/2^64 with the angle folded into [0, π/4]."""
    octant = (h >> np.uint64(_OCTANT_BITS)).astype(np.int64)
    rest = (h & np.uint64((1 << _OCTANT_BITS) - 1)).astype(np.int64)
    folded = np.where(octant & 1, (1 << _OCTANT_BITS) - rest, rest)
    theta = folded.astype(np.float64) * _TURN_SCALE
    c, s = np.cos(theta), np.sin(theta)
    swap = _SWAP[octant]
    cos = _COS_SIGN[octant] * np.where(swap, s, c)
    sin = _SIN_SIGN[octant] * np.where(swap, c, s)
    return cos, sin


def _check_range(table: MobiusTable, N: int) -> None:
    if N < 1:
        raise InvalidParams("N must be positive.")
    if N > table.limit:
        raise InvalidParams(f"N = {N} exceeds the sieve limit {table.limit}.")
    if N > MAX_N:
        raise InvalidParams(f"N must stay below 2^31, got {N}.")


def _check_precision(turn_error: float, N: int) -> None:
    if 2 * math.pi * turn_error * N > 2.0**-48:
        raise PrecisionExhausted(
            f"Angle uncertainty {turn_error:.3e} is too large for N = {N}; increase the precision."
        )


@dataclass(frozen=True)
class _BlockSum:
    re: float
    im: float
    terms: int
    weight: float  # Σ n over the nonzero terms


def _combine(blocks: Sequence[_BlockSum], term_eps: float, turn_error: float) -> tuple[complex, float]:
    re = math.fsum(b.re for b in blocks)
    im = math.fsum(b.im for b in blocks)
    terms = sum(b.terms for b in blocks)
    weight = math.fsum(b.weight for b in blocks)
    rounding = _U * (math.fsum(abs(b.re) + abs(b.im) for b in blocks) + abs(re) + abs(im))
    error = terms * term_eps + rounding + 2 * math.pi * turn_error * weight
    return complex(re, im), error


def _mu_block(table: MobiusTable, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    mu = table.values[lo:hi]
    nonzero = np.flatnonzero(mu)
    return (nonzero + lo).astype(np.uint64), mu[nonzero].astype(np.float64)


def mobius_exponential_sum(
    table: MobiusTable,
    alpha: AngleLike,
    N: int,
    workers: int = 1,
    reverse: bool = False,
) -> MobiusSumResult:
    """Σ_{n≤N} μ(n)·e(nα) as a complex value with a propagated error bound."""
    _check_range(table, N)
    A, turn_error = _fixed_point(alpha)
    _check_precision(turn_error, N)
    limbs = _limbs(A)

    def block(lo: int, hi: int) -> _BlockSum:
        n, weights = _mu_block(table, lo, hi)
        cos, sin = _cos_sin(_turns(limbs, n))
        return _BlockSum(
            math.fsum(weights * cos), math.fsum(weights * sin), len(n), float(n.sum(dtype=np.float64))
        )

    blocks = map_chunks(block, 1, N + 1, workers, BLOCK)
    if reverse:
        blocks = blocks[::-1]
    value, error = _combine(blocks, TERM_EPS, turn_error)
    return MobiusSumResult(N, value, error, None, "reverse" if reverse else "forward")


def _frobenius_bound(spectrum: FrobeniusSpectrum, N: int, slack: float) -> float | None:
    if N < 2:
        return None
    from .bounds import bound_rhs

    return float(bound_rhs("theorem2", q=spectrum.q, g=spectrum.g, N=N, slack=slack))


def mobius_frobenius_sum(
    table: MobiusTable,
    spectrum: FrobeniusSpectrum,
    N: int,
    method: str = "direct",
    slack: float = 1.0,
    workers: int = 1,
) -> MobiusSumResult:
    """Σ_{n≤N} μ(n)·a_C(n), either term by term or one angle at a time."""
    _check_range(table, N)
    two_g = 2 * spectrum.g
    angles = [spectrum.angle_ball(j) for j in range(len(spectrum.angles))]

    if method == "direct":
        fixed = [_fixed_point(a) for a in angles]
        turn_error = max(e for _, e in fixed)
        _check_precision(turn_error, N)
        all_limbs = [_limbs(A) for A, _ in fixed]

        def block(lo: int, hi: int) -> _BlockSum:
            n, weights = _mu_block(table, lo, hi)
            total = np.zeros(len(n), dtype=np.float64)
            for limbs in all_limbs:
                total += _cos_sin(_turns(limbs, n))[0]
            return _BlockSum(math.fsum(weights * (total / two_g)), 0.0, len(n), float(n.sum(dtype=np.float64)))

        blocks = map_chunks(block, 1, N + 1, workers, BLOCK)
        value, error = _combine(blocks, TERM_EPS + two_g * _U, turn_error)
        total = value.real
    elif method == "swapped":
        sums = [mobius_exponential_sum(table, a, N, workers) for a in angles]
        total = math.fsum(s.value.real for s in sums) / two_g
        imag = math.fsum(s.value.imag for s in sums) / two_g
        error = math.fsum(s.error_bound for s in sums) / two_g + _U * abs(total) * 2
        if abs(imag) > error:
            raise PrecisionExhausted(
                f"Imaginary residue {imag:.3e} of the swapped sum exceeds its error bound {error:.3e}."
            )
    else:
        raise InvalidParams(f"Unknown method {method!r}; expected 'direct' or 'swapped'.")

    return MobiusSumResult(N, total, error, _frobenius_bound(spectrum, N, slack), method)


def davenport_profile(
    table: MobiusTable,
    spectrum: FrobeniusSpectrum,
    Ns: Sequence[int],
    Bs: Sequence[float],
    c: float = 1.0,
    workers: int = 1,
) -> pd.DataFrame:
    """|S(N)|·(log N)^B / (c·N) for each N ≥ 2 and B."""
    if c <= 0:
        raise InvalidParams("The constant c(B) must be positive.")
    rows = []
    for N in sorted(set(Ns)):
        if N < 2:
            raise InvalidParams("Davenport profile needs N ≥ 2.")
        result = mobius_frobenius_sum(table, spectrum, N, "direct", workers=workers)
        for B in Bs:
            rows.append(
                {
                    "N": N,
                    "B": B,
                    "value": result.value,
                    "error_bound": result.error_bound,
                    "normalised": abs(result.value) * math.log(N) ** B / (c * N),
                }
            )
    return pd.DataFrame(rows, columns=["N", "B", "value", "error_bound", "normalised"])


def mobius_sum_mp(table: MobiusTable, alpha: mpf | Fraction, N: int, bits: int = 128) -> mpmath.mpc:
    """Reference evaluation in mpmath at ``bits`` of working precision, for small N."""
    _check_range(table, N)
    with mpmath.mp.workprec(bits):
        if isinstance(alpha, Fraction):
            alpha = mpf(alpha.numerator) / alpha.denominator
        return mpmath.fsum(
            int(table.values[n]) * mpmath.expjpi(2 * n * alpha) for n in range(1, N + 1) if table.values[n]
        )
