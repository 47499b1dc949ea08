"""Explicit constants and bound right-hand sides, evaluated with mpmath.

Integer prefactors stay exact until the final multiplication; logarithms are
natural.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Any

import mpmath
from mpmath import mp, mpf

from .errors import InvalidParams

DEFAULT_BITS = 128
BW_TWO_PREFACTOR = 2**25 * 3**3  # 905969664
KAPPA_FROBENIUS_PREFACTOR = 2**31 * 3**3
GAMMA_PREFACTOR = 2**33 * 3**3
BOUND_NAMES = ("gap_lower", "mobexp2", "mu_alpha", "davenport", "theorem1", "theorem2")


@dataclass(frozen=True)
class KappaParams:
    d: int
    A1: mpf
    alpha: mpf

    def __post_init__(self) -> None:
        if self.d < 2:
            raise InvalidParams("The degree d of e(α) must be at least 2.")
        if self.A1 < mpf(1) / self.d:
            raise InvalidParams("A1 must be at least 1/d.")

    @classmethod
    def from_height(cls, d: int, height: Any, alpha: Any, bits: int = DEFAULT_BITS) -> "KappaParams":
        """A1 = max(h(e(α)), 2πα/d, 1/d) with α reduced to [0, 1) first."""
        with mp.workprec(bits):
            a = mpf(alpha)
            a -= mpmath.floor(a)
            A1 = max(mpf(height), 2 * mpmath.pi * a / d, mpf(1) / d)
        return cls(d, A1, a)


@dataclass(frozen=True)
class BoundProfile:
    q: int
    g: int
    kappa_qg: mpf
    gamma_qg: mpf

    def to_json(self, digits: int = 40) -> dict[str, Any]:
        return {
            "q": self.q,
            "g": self.g,
            "kappa": mpmath.nstr(self.kappa_qg, digits),
            "gamma": mpmath.nstr(self.gamma_qg, digits),
        }


def bw_constant(n: int, d: int, bits: int = DEFAULT_BITS) -> mpf:
    """C(n, d) = 18(n+1)!·n^{n+1}·(32d)^{n+2}·log(2nd)."""
    if n < 2 or d < 1:
        raise InvalidParams("bw_constant needs n ≥ 2 and d ≥ 1.")
    prefactor = 18 * math.factorial(n + 1) * n ** (n + 1) * (32 * d) ** (n + 2)
    with mp.workprec(bits):
        return prefactor * mpmath.log(2 * n * d)


def bw_constant_two(d: int, bits: int = DEFAULT_BITS) -> mpf:
    """C(2, d) in the closed form 2^25·3^3·d^4·log(4d)."""
    if d < 1:
        raise InvalidParams("d must be at least 1.")
    with mp.workprec(bits):
        return BW_TWO_PREFACTOR * d**4 * mpmath.log(4 * d)


def kappa_alpha(params: KappaParams, bits: int = DEFAULT_BITS) -> mpf:
    """κ(α) = 2^25·3^3·π·d^3·A1·log(4d)."""
    d = params.d
    with mp.workprec(bits):
        return BW_TWO_PREFACTOR * d**3 * mpmath.pi * params.A1 * mpmath.log(4 * d)


def _check_qg(q: int, g: int) -> None:
    if q < 2 or g < 1:
        raise InvalidParams("Need q ≥ 2 and g ≥ 1.")


def kappa_frobenius(q: int, g: int, bits: int = DEFAULT_BITS) -> mpf:
    """κ(q, g) = 2^31·3^3·π·g^3·(π + log q)·log(16g)."""
    _check_qg(q, g)
    with mp.workprec(bits):
        return KAPPA_FROBENIUS_PREFACTOR * g**3 * mpmath.pi * (mpmath.pi + mpmath.log(q)) * mpmath.log(16 * g)


def gamma(q: int, g: int, bits: int = DEFAULT_BITS) -> mpf:
    """γ(q, g) = 2^33·3^3·π·g^3·(π + log q)·log(16g) + 4, evaluated directly."""
    _check_qg(q, g)
    with mp.workprec(bits):
        return GAMMA_PREFACTOR * g**3 * mpmath.pi * (mpmath.pi + mpmath.log(q)) * mpmath.log(16 * g) + 4


def gamma_from_kappa(q: int, g: int, bits: int = DEFAULT_BITS) -> mpf:
    with mp.workprec(bits):
        return 4 * kappa_frobenius(q, g, bits) + 4


def frobenius_kappa_params(q: int, g: int, bits: int = DEFAULT_BITS) -> KappaParams:
    """Worst case over Frobenius angles: d = 4g and A1 = π + log q."""
    _check_qg(q, g)
    with mp.workprec(bits):
        return KappaParams(4 * g, mpmath.pi + mpmath.log(q), mpf(0))


def bound_profile(q: int, g: int, bits: int = DEFAULT_BITS) -> BoundProfile:
    return BoundProfile(q, g, kappa_frobenius(q, g, bits), gamma(q, g, bits))


def dirichlet_parameter(kappa: Any, N: int) -> int:
    """M = ⌈N^{κ/(κ+1)}⌉."""
    if N < 1:
        raise InvalidParams("N must be positive.")
    with mp.workprec(DEFAULT_BITS):
        k = mpf(kappa)
        if k <= 0:
            raise InvalidParams("κ must be positive.")
        return int(mpmath.ceil(mpf(N) ** (k / (k + 1))))


def _need(params: dict[str, Any], *names: str) -> list[Any]:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise InvalidParams(f"Missing parameters: {', '.join(missing)}.")
    return [params[n] for n in names]


def bound_rhs(name: str, bits: int = DEFAULT_BITS, **params: Any) -> mpf:
    """Evaluate a named bound right-hand side, multiplied by ``slack`` (default 1)."""
    if name not in BOUND_NAMES:
        raise InvalidParams(f"Unknown bound {name!r}; expected one of {', '.join(BOUND_NAMES)}.")
    slack = params.get("slack", 1)
    if slack is None or slack < 0:
        raise InvalidParams("slack must be non-negative.")
    with mp.workprec(bits):
        if name == "gap_lower":
            s, kappa = _need(params, "s", "kappa")
            if s < 1 or kappa <= 0:
                raise InvalidParams("gap_lower needs s ≥ 1 and κ > 0.")
            return slack / (mpmath.pi * mpf(2 * s) ** (1 + mpf(kappa)))

        (N,) = _need(params, "N")
        if N < 2:
            raise InvalidParams("N must be at least 2.")
        N = mpf(N)
        log_n = mpmath.log(N)

        if name == "mobexp2":
            (s,) = _need(params, "s")
            if s < 1:
                raise InvalidParams("s must be at least 1.")
            s = mpf(s)
            inner = s ** mpf(0.25) * N ** mpf(0.25) + s ** mpf(-0.25) * N ** mpf(0.5) + N ** (mpf(2) / 5)
            return slack * inner * mpmath.sqrt(N) * log_n**4
        if name == "mu_alpha":
            (kappa,) = _need(params, "kappa")
            if kappa <= 0:
                raise InvalidParams("κ must be positive.")
            return slack * N ** (1 - 1 / (4 * mpf(kappa) + 4)) * log_n**4
        if name in ("davenport", "theorem1"):
            c, B = _need(params, "c", "B")
            if c <= 0:
                raise InvalidParams("c(B) must be positive.")
            return slack * mpf(c) * N * log_n ** (-mpf(B))
        if name == "theorem2":
            q, g = _need(params, "q", "g")
            return slack * N ** (1 - 1 / gamma(q, g, bits)) * log_n**4
    raise AssertionError(name)  # unreachable


def log_gap_lower(s: int, kappa: Any, bits: int = DEFAULT_BITS) -> mpf:
    """log of 1/(π(2s)^{1+κ}); the bound itself underflows for Frobenius κ."""
    if s < 1:
        raise InvalidParams("s must be at least 1.")
    with mp.workprec(bits):
        return -mpmath.log(mpmath.pi) - (1 + mpf(kappa)) * mpmath.log(2 * s)
