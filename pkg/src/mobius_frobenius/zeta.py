"""L-polynomials from point counts, certified Frobenius eigenvalues and angles."""

from __future__ import annotations

from dataclasses import dataclass
import logging
from typing import Any, Sequence, Union

import mpmath
from mpmath import mp, mpc, mpf
import numpy as np
from sympy import Poly, symbols

from .curves import CountRecord
from .errors import (
    ClusteredRoots,
    InvalidParams,
    NonIntegerCoefficient,
    PrecisionExhausted,
    SymmetryViolation,
    WeilViolation,
)
from .precision import GUARD_BITS, Ball, nstr

logger = logging.getLogger("mobius_frobenius")
if logger.level == logging.NOTSET:
    logger.setLevel(logging.INFO)

MAX_PRECISION_BITS = 1024
NEWTON_STEPS = 200
_T = symbols("T")


@dataclass(frozen=True)
class LPolynomial:
    """P(T) = Σ c_i T^i, c_0 = 1, degree 2g."""

    q: int
    g: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.q < 2 or self.g < 1:
            raise InvalidParams("LPolynomial needs q ≥ 2 and g ≥ 1.")
        if len(self.coeffs) != 2 * self.g + 1 or self.coeffs[0] != 1:
            raise InvalidParams(f"Expected 2g+1 = {2 * self.g + 1} coefficients with c_0 = 1.")

    def check_symmetry(self) -> None:
        c, q, g = self.coeffs, self.q, self.g
        for i in range(g + 1):
            if c[2 * g - i] != q ** (g - i) * c[i]:
                raise SymmetryViolation(
                    f"c_{2 * g - i} = {c[2 * g - i]} but q^{g - i}·c_{i} = {q ** (g - i) * c[i]}."
                )

    def reciprocal(self) -> list[int]:
        """Coefficients of T^{2g}·P(1/T), highest degree first."""
        return list(self.coeffs)

    def power_sums(self, n: int) -> list[int]:
        """s_1..s_n with s_k = Σ β_j^k = A_C(k)."""
        c, two_g = self.coeffs, 2 * self.g
        s: list[int] = []
        for k in range(1, n + 1):
            total = sum(c[i] * s[k - i - 1] for i in range(1, min(k - 1, two_g) + 1))
            if k <= two_g:
                total += k * c[k]
            s.append(-total)
        return s

    def point_count(self, n: int) -> int:
        """Predicted #C(F_{q^n})."""
        return self.q**n + 1 - self.power_sums(n)[-1]

    def to_json(self, p: int | None = None) -> dict[str, Any]:
        data: dict[str, Any] = {
            "q": str(self.q),
            "g": self.g,
            "P": [str(c) for c in self.coeffs],
        }
        if p is not None:
            data["ordinary"] = is_ordinary(self, p)
        return data


@dataclass(frozen=True)
class TraceValue:
    value: mpf
    error: mpf


@dataclass(frozen=True)
class FrobeniusSpectrum:
    q: int
    g: int
    eigenvalues: tuple[mpc, ...]
    angles: tuple[mpf, ...]
    multiplicities: tuple[int, ...]
    radius: mpf
    angle_radius: mpf
    precision_bits: int

    def angle_ball(self, j: int) -> Ball:
        if not 0 <= j < len(self.angles):
            raise InvalidParams(f"Angle index {j} out of range 0..{len(self.angles) - 1}.")
        return Ball(self.angles[j], self.angle_radius)

    def to_json(self) -> dict[str, Any]:
        bits = self.precision_bits
        return {
            "q": str(self.q),
            "g": self.g,
            "precision_bits": bits,
            "radius": nstr(self.radius, 16),
            "angle_radius": nstr(self.angle_radius, 16),
            "eigenvalues": [[nstr(b.real, bits), nstr(b.imag, bits)] for b in self.eigenvalues],
            "angles": [nstr(a, bits) for a in self.angles],
            "multiplicities": list(self.multiplicities),
        }


def reconstruct_l_polynomial(records: Sequence[CountRecord], q: int, g: int) -> LPolynomial:
    """Newton's identities on s_k = A_C(k), k = 1..2g, then the functional-equation check."""
    by_n = {r.n: r.trace for r in records}
    missing = [n for n in range(1, 2 * g + 1) if n not in by_n]
    if missing:
        raise InvalidParams(f"Missing count records for n = {missing}.")
    s = [by_n[n] for n in range(1, 2 * g + 1)]
    c = [1]
    for k in range(1, 2 * g + 1):
        total = sum(c[i] * s[k - i - 1] for i in range(k))
        if total % k:
            raise NonIntegerCoefficient(f"c_{k} = -{total}/{k} is not an integer.")
        c.append(-total // k)
    lpoly = LPolynomial(q, g, tuple(c))
    lpoly.check_symmetry()
    return lpoly


def is_ordinary(lpoly: LPolynomial, p: int) -> bool:
    return lpoly.coeffs[lpoly.g] % p != 0


def eigenvalue_height(q: int) -> mpf:
    if q < 2:
        raise InvalidParams("q must be at least 2.")
    return mpmath.log(q) / 2


def angle_exponential_height_bound(q: int) -> mpf:
    if q < 2:
        raise InvalidParams("q must be at least 2.")
    return mpmath.log(q)


def _aberth_seeds(coeffs: Sequence[int], max_iter: int = 500, tol: float = 1e-14) -> np.ndarray:
    c = np.array([float(x) for x in coeffs], dtype=np.float64)
    n = len(c) - 1
    if n == 1:
        return np.array([-c[1] / c[0]], dtype=np.complex128)
    d = np.polyder(c)
    radius = 1.0 + np.max(np.abs(c[1:] / c[0]))
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    for _ in range(max_iter):
        pv = np.polyval(c, z)
        dv = np.polyval(d, z)
        ratio = np.divide(pv, dv, out=np.zeros_like(pv), where=dv != 0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        repulsion = (1.0 / diff).sum(axis=1) - 1.0
        delta = ratio / (1.0 - ratio * repulsion)
        z = z - delta
        if np.max(np.abs(delta)) <= tol * max(1.0, np.max(np.abs(z))):
            break
    return z


def _refine(coeffs: list[mpf], seed: complex, bits: int) -> mpc:
    z = mpc(seed)
    threshold = mpmath.ldexp(1, -(bits - 4))
    for _ in range(NEWTON_STEPS):
        value, slope = mpmath.polyval(coeffs, z, derivative=True)
        if slope == 0:
            raise PrecisionExhausted("Zero derivative during Newton refinement.")
        step = value / slope
        z -= step
        if abs(step) <= threshold * max(abs(z), 1):
            return z
    raise PrecisionExhausted(f"Newton refinement did not converge at {bits} bits.")


def _certified_roots(
    factor: list[int], precision_bits: int, seeds: Sequence[complex]
) -> list[tuple[mpc, mpf]]:
    degree = len(factor) - 1
    work = precision_bits + GUARD_BITS
    roots = []
    with mp.workprec(work):
        coeffs = [mpf(c) for c in factor]
        unit = mpmath.ldexp(1, -(work - 4))
        for seed in seeds:
            z = _refine(coeffs, complex(seed), work)
            value, slope = mpmath.polyval(coeffs, z, derivative=True)
            if slope == 0:
                raise PrecisionExhausted("Derivative vanishes at a refined root.")
            size = abs(z)
            rounding = unit * degree * sum(abs(c) * size**i for i, c in enumerate(reversed(coeffs)))
            radius = degree * (abs(value) + rounding) / abs(slope) + size * mpmath.ldexp(1, -precision_bits)
            roots.append((z, radius))
    return roots


def _disks_overlap(roots: list[tuple[mpc, mpf]]) -> bool:
    for i, (z, r) in enumerate(roots):
        for w, s in roots[i + 1 :]:
            if abs(z - w) <= r + s:
                return True
    return False


def compute_spectrum(lpoly: LPolynomial, precision_bits: int = 128) -> FrobeniusSpectrum:
    """Roots of T^{2g}P(1/T) with certified radii, and their normalised angles."""
    if precision_bits < 64:
        raise InvalidParams("precision_bits must be at least 64.")
    q, g = lpoly.q, lpoly.g
    _, factors = Poly(lpoly.reciprocal(), _T).sqf_list()

    located: list[tuple[mpc, mpf, int]] = []
    for factor_poly, multiplicity in factors:
        factor = [int(c) for c in factor_poly.all_coeffs()]
        if len(factor) < 2:
            continue
        roots = _certified_roots(factor, precision_bits, _aberth_seeds(factor))
        if _disks_overlap(roots):
            logger.warning("Machine-precision seeds collided; reseeding with mpmath.polyroots.")
            with mp.workprec(precision_bits + GUARD_BITS):
                seeds = mpmath.polyroots(factor, maxsteps=200, extraprec=precision_bits)
            roots = _certified_roots(factor, precision_bits, [complex(s) for s in seeds])
        located.extend((z, r, multiplicity) for z, r in roots)
        if multiplicity > 1:
            logger.info("Repeated eigenvalue factor of degree %s with multiplicity %s.", len(factor) - 1, multiplicity)

    pairs = [(z, r) for z, r, _ in located]
    if _disks_overlap(pairs):
        raise ClusteredRoots("Error disks of distinct eigenvalues overlap.")

    with mp.workprec(precision_bits + GUARD_BITS):
        sqrt_q = mpmath.sqrt(q)
        radius = max(r for _, r in pairs)
        if radius > mpmath.ldexp(sqrt_q, -(precision_bits - 16)):
            raise PrecisionExhausted(f"Eigenvalue radius {mpmath.nstr(radius, 5)} too large at {precision_bits} bits.")
        slack = mpmath.ldexp(sqrt_q, -precision_bits)
        for z, r in pairs:
            if abs(abs(z) - sqrt_q) > r + slack:
                raise WeilViolation(f"|β| = {mpmath.nstr(abs(z), 20)} differs from √{q}.")
        angle_radius = radius / (4 * (sqrt_q - radius)) + mpmath.ldexp(1, -precision_bits)

        entries = []
        for z, _, multiplicity in located:
            alpha = mpmath.atan2(z.imag, z.real) / (2 * mpmath.pi)
            if alpha < 0:
                alpha += 1
            entries.extend([(alpha, z, multiplicity)] * multiplicity)
    entries.sort(key=lambda e: e[0])
    if len(entries) != 2 * g:
        raise ArithmeticError(f"Found {len(entries)} eigenvalues, expected {2 * g}.")

    return FrobeniusSpectrum(
        q=q,
        g=g,
        eigenvalues=tuple(z for _, z, _ in entries),
        angles=tuple(a for a, _, _ in entries),
        multiplicities=tuple(m for _, _, m in entries),
        radius=radius,
        angle_radius=angle_radius,
        precision_bits=precision_bits,
    )


def certified_spectrum(
    lpoly: LPolynomial, precision_bits: int = 128, max_bits: int = MAX_PRECISION_BITS
) -> FrobeniusSpectrum:
    """compute_spectrum, doubling the precision on PrecisionExhausted up to ``max_bits``."""
    bits = precision_bits
    while True:
        try:
            return compute_spectrum(lpoly, bits)
        except PrecisionExhausted as exc:
            if bits * 2 > max_bits:
                raise
            logger.warning("Certification failed at %s bits (%s); retrying at %s.", bits, exc, bits * 2)
            bits *= 2


def trace_eval(
    source: Union[LPolynomial, FrobeniusSpectrum],
    n: int,
    mode: str = "exact",
    tolerance: mpf | float | None = None,
) -> Union[int, TraceValue]:
    """A_C(n) exactly from the L-polynomial, or a_C(n) from the angles with an error bound."""
    if n < 1:
        raise InvalidParams("n must be positive.")
    if mode == "exact":
        if not isinstance(source, LPolynomial):
            raise InvalidParams("exact mode needs an LPolynomial.")
        return source.power_sums(n)[-1]
    if mode != "angles":
        raise InvalidParams(f"Unknown trace_eval mode {mode!r}.")
    if not isinstance(source, FrobeniusSpectrum):
        raise InvalidParams("angles mode needs a FrobeniusSpectrum.")

    bits = source.precision_bits
    with mp.workprec(bits + GUARD_BITS):
        two_pi_n = 2 * mpmath.pi * n
        value = mpmath.fsum(mpmath.cos(two_pi_n * a) for a in source.angles) / (2 * source.g)
        error = two_pi_n * source.angle_radius + mpmath.ldexp(1, -(bits - 8))
    if tolerance is not None and error > tolerance:
        raise PrecisionExhausted(f"a_C({n}) error {mpmath.nstr(error, 5)} exceeds tolerance {tolerance}.")
    return TraceValue(value, error)
