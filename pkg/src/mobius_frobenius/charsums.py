"""Trace character sums S_R(n), Kloosterman sums and their spectral recurrence.

The additive character is ψ(x) = e(Tr_{F_q/F_p}(c·x)/p) with c = 1 by default.
Sums are accumulated as exact integer histograms of F_p-trace values and only
then evaluated as Σ h_k·e(k/p) at the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import Any, Sequence

import mpmath
from mpmath import mp, mpc, mpf
import numpy as np
import pandas as pd
from sympy import factorint

from .errors import DegenerateR, InvalidParams, WeilViolation
from .fields import (
    DEFAULT_ENUMERATION_BUDGET,
    FieldDesc,
    FieldElement,
    FiniteField,
    check_budget,
    log_tables,
    make_extension,
    make_field,
    trace_to_prime,
)
from .mobius import MobiusSumResult, MobiusTable, mobius_exponential_sum
from .parallel import map_chunks
from .precision import GUARD_BITS, Ball

logger = logging.getLogger("mobius_frobenius")
if logger.level == logging.NOTSET:
    logger.setLevel(logging.INFO)

DEFAULT_AS_DEGREE_CAP = 64


@dataclass(frozen=True)
class RationalMap:
    """R(X) = numerator(X) / denominator(X); coefficients constant term first."""

    base: FieldDesc
    numerator: tuple[FieldElement, ...]
    denominator: tuple[FieldElement, ...]
    a: FieldElement | None = None

    def __post_init__(self) -> None:
        if all(c.is_zero() for c in self.denominator):
            raise InvalidParams("Denominator of R is identically zero.")

    @classmethod
    def kloosterman(cls, base: FieldDesc, a: Any) -> "RationalMap":
        """R(X) = aX + 1/X = (aX² + 1)/X."""
        a = base.element(a)
        if a.is_zero():
            raise InvalidParams("Kloosterman parameter a must be nonzero.")
        return cls(base, (base.one(), base.zero(), a), (base.zero(), base.one()), a)

    @classmethod
    def polynomial(cls, base: FieldDesc, coeffs: Sequence[Any]) -> "RationalMap":
        return cls(base, tuple(base.element(c) for c in coeffs), (base.one(),))

    @property
    def is_polynomial(self) -> bool:
        return all(c.is_zero() for c in self.denominator[1:])


@dataclass(frozen=True)
class CharSum:
    value: mpc
    error: mpf
    terms: int


@dataclass(frozen=True)
class KloostermanSpectrum:
    q: int
    a: FieldElement
    T1: mpf
    theta: mpc
    phi: mpf
    phi_radius: mpf
    precision_bits: int

    @property
    def angle(self) -> Ball:
        return Ball(self.phi, self.phi_radius)


def _trim(coeffs: list[Any], zero: Any) -> list[Any]:
    while coeffs and coeffs[-1] == zero:
        coeffs.pop()
    return coeffs


def artin_schreier_reduce(R: RationalMap) -> list[Any]:
    """Strip leading terms cX^{pe} by subtracting (bX^e)^p − bX^e with b^p = c."""
    K = R.base
    zero = K.zero_raw()
    inv = K.inv_raw(R.denominator[0].coeffs)
    f = _trim([K.mul_raw(c.coeffs, inv) for c in R.numerator], zero)
    root_exponent = K.order // K.p
    while len(f) > 1:
        D = len(f) - 1
        if D % K.p:
            break
        lead = f[D]
        b = K.pow_raw(lead, root_exponent)
        f[D] = zero
        f[D // K.p] = K.add_raw(f[D // K.p], b)
        f = _trim(f, zero)
    return f


def check_nondegenerate(R: RationalMap, degree_cap: int = DEFAULT_AS_DEGREE_CAP) -> None:
    if not R.is_polynomial:
        return
    degree = len(_trim([c.coeffs for c in R.numerator], R.base.zero_raw())) - 1
    if degree > degree_cap:
        logger.info("Skipping Artin–Schreier check: degree %s exceeds cap %s.", degree, degree_cap)
        return
    if len(artin_schreier_reduce(R)) <= 1:
        raise DegenerateR("R is of the form Q^p − Q + constant; the character sum is trivial.")


def _trace_vector(field: FiniteField, c: FieldElement) -> np.ndarray:
    """Values of x ↦ Tr_{F/F_p}(c·x) on the F_p-basis."""
    scale = field.coerce_raw(c)
    return np.array(
        [trace_to_prime(FieldElement(field.mul_raw(scale, b), field)) for b in field.basis()],
        dtype=np.int64,
    )


def trace_histogram(
    R: RationalMap,
    n: int,
    c: Any = 1,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
) -> np.ndarray:
    """h_k = #{x ∈ F_{q^n}^* : den(x) ≠ 0, Tr(c·R(x)) = k} for k in F_p."""
    if n < 1:
        raise InvalidParams("n must be positive.")
    K = R.base
    check_budget(K.order**n, budget, "character sum")
    ext = make_extension(K, n)
    tables = log_tables(ext, budget)
    scale = K.element(c)
    if scale.is_zero():
        raise InvalidParams("The character scale c must be nonzero.")
    vector = _trace_vector(ext, scale)
    num = [ext.encode(ext.embed_raw(x.coeffs)) for x in R.numerator] or [0]
    den = [ext.encode(ext.embed_raw(x.coeffs)) for x in R.denominator]
    p = K.p

    def partial(lo: int, hi: int) -> np.ndarray:
        x = np.arange(lo, hi, dtype=np.int64)
        d = tables.horner(den, x)
        keep = d != 0
        y = tables.mul(tables.horner(num, x[keep]), tables.inv(d[keep]))
        return np.bincount(tables.functional(y, vector), minlength=p)

    return np.sum(map_chunks(partial, 1, ext.order, workers), axis=0, dtype=np.int64)


def evaluate_histogram(hist: np.ndarray, p: int, precision_bits: int) -> CharSum:
    """Σ h_k·e(k/p) with a rounding bound."""
    terms = int(hist.sum())
    with mp.workprec(precision_bits + GUARD_BITS):
        value = mpmath.fsum(int(h) * mpmath.expjpi(mpf(2 * k) / p) for k, h in enumerate(hist) if h)
        value = mpc(value)
        error = terms * mpmath.ldexp(1, -(precision_bits - 2))
    return CharSum(value, error, terms)


def char_sum_direct(
    R: RationalMap,
    n: int,
    precision_bits: int = 128,
    c: Any = 1,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
    degree_cap: int = DEFAULT_AS_DEGREE_CAP,
    normalised: bool = True,
) -> CharSum:
    """q^{−n/2}·Σ_{x ∈ F_{q^n}^*, den(x) ≠ 0} ψ(Tr(R(x))); ``normalised=False`` drops the factor."""
    check_nondegenerate(R, degree_cap)
    total = evaluate_histogram(trace_histogram(R, n, c, budget, workers), R.base.p, precision_bits)
    if not normalised:
        return total
    with mp.workprec(precision_bits + GUARD_BITS):
        scale = mpf(R.base.order) ** (mpf(n) / 2)
        return CharSum(total.value / scale, total.error / scale, total.terms)


def kloosterman_field(q: int) -> FieldDesc:
    factors = factorint(q)
    if len(factors) != 1:
        raise InvalidParams(f"q = {q} is not a prime power.")
    ((p, m),) = factors.items()
    return make_field(int(p), int(m))


def kloosterman_sum(
    q: int,
    a: Any,
    n: int,
    precision_bits: int = 128,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
    degree_cap: int = DEFAULT_AS_DEGREE_CAP,
) -> CharSum:
    """Unnormalised T_n = Σ_{x ∈ F_{q^n}^*} ψ(Tr(ax + 1/x))."""
    R = RationalMap.kloosterman(kloosterman_field(q), a)
    return char_sum_direct(
        R, n, precision_bits, budget=budget, workers=workers, degree_cap=degree_cap, normalised=False
    )


def kloosterman_spectrum(
    q: int, a: Any, T1: Any, t1_error: Any = 0, precision_bits: int = 128
) -> KloostermanSpectrum:
    """Solve θ + θ̄ = T1, θθ̄ = q with Im θ ≥ 0; φ = Arg θ / 2π ∈ [0, 1/2]."""
    base = kloosterman_field(q)
    with mp.workprec(precision_bits + GUARD_BITS):
        t1 = mpf(mpmath.re(T1))
        err = mpf(t1_error)
        tolerance = err + mpmath.ldexp(mpmath.sqrt(q), -(precision_bits - 8))
        if abs(t1) > 2 * mpmath.sqrt(q) + tolerance:
            raise WeilViolation(f"|T1| = {mpmath.nstr(abs(t1), 15)} exceeds 2√{q}.")
        disc = max(mpf(q) - t1**2 / 4, mpf(0))
        root = mpmath.sqrt(disc)
        theta = mpc(t1 / 2, root)
        phi = mpmath.atan2(root, t1 / 2) / (2 * mpmath.pi)
        # arccos is ½-Hölder near ±1; take the sharper of that and the derivative bound
        x_err = err / (2 * mpmath.sqrt(q))
        radius = mpmath.sqrt(x_err / 2) / 2
        if disc > 0 and err > 0:
            radius = min(radius, err / (4 * mpmath.pi * root))
        radius += mpmath.ldexp(1, -(precision_bits - 8))
    return KloostermanSpectrum(q, base.element(a), t1, theta, phi, radius, precision_bits)


def kloosterman_predict(spectrum: KloostermanSpectrum, n: int) -> mpf:
    """T_n = (−1)^{n+1}(θ^n + θ̄^n) = (−1)^{n+1}·2·q^{n/2}·cos(2πnφ).

    The Weil eigenvalue of the sum is −θ̄, so the even terms flip sign.
    """
    if n < 0:
        raise InvalidParams("n must be non-negative.")
    if n == 1:
        return spectrum.T1
    with mp.workprec(spectrum.precision_bits + GUARD_BITS):
        sign = 1 if n % 2 else -1
        return sign * 2 * mpf(spectrum.q) ** (mpf(n) / 2) * mpmath.cos(2 * mpmath.pi * n * spectrum.phi)


@dataclass(frozen=True)
class RecurrenceReport:
    table: pd.DataFrame
    max_deviation: mpf
    spectrum: KloostermanSpectrum


def recurrence_check(
    q: int,
    a: Any,
    n_max: int,
    precision_bits: int = 128,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
    degree_cap: int = DEFAULT_AS_DEGREE_CAP,
) -> RecurrenceReport:
    """Direct T_n against T_{n+1} = −T_1·T_n − q·T_{n−1} seeded with T_0 = −2."""
    if n_max < 1:
        raise InvalidParams("n_max must be positive.")
    check_budget(q**n_max, budget, "Kloosterman sum")
    direct = [
        kloosterman_sum(q, a, n, precision_bits, budget, workers, degree_cap) for n in range(1, n_max + 1)
    ]
    rows = []
    with mp.workprec(precision_bits + GUARD_BITS):
        for n, s in enumerate(direct, start=1):
            weil = 2 * mpf(q) ** (mpf(n) / 2)
            if abs(s.value.real) > weil + s.error:
                raise WeilViolation(f"|T_{n}| exceeds 2q^(n/2) for q={q}.")
        t1 = direct[0].value.real
        spectrum = kloosterman_spectrum(q, a, t1, direct[0].error, precision_bits)
        previous, current = mpf(-2), t1
        worst = mpf(0)
        for n, s in enumerate(direct, start=1):
            deviation = abs(s.value.real - current)
            worst = max(worst, deviation)
            rows.append(
                {
                    "n": n,
                    "T_n_direct": mpmath.nstr(s.value.real, 25),
                    "T_n_recurrence": mpmath.nstr(current, 25),
                    "imag": mpmath.nstr(s.value.imag, 5),
                    "deviation": mpmath.nstr(deviation, 5),
                }
            )
            previous, current = current, -t1 * current - q * previous
    frame = pd.DataFrame(rows, columns=["n", "T_n_direct", "T_n_recurrence", "imag", "deviation"])
    return RecurrenceReport(frame, worst, spectrum)


def mobius_char_sum(
    table: MobiusTable,
    spectrum: KloostermanSpectrum,
    N: int,
    kappa: Any = None,
    slack: float = 1.0,
    reverse: bool = False,
    workers: int = 1,
) -> MobiusSumResult:
    """Σ_{n≤N} μ(n)·cos(2πnφ), with the μ-α bound when κ is given."""
    result = mobius_exponential_sum(table, spectrum.angle, N, workers, reverse)
    rhs = None
    if kappa is not None and N >= 2:
        from .bounds import bound_rhs

        rhs = float(bound_rhs("mu_alpha", kappa=kappa, N=N, slack=slack))
    return MobiusSumResult(N, result.value.real, result.error_bound, rhs, result.method)
