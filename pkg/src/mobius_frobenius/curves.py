"""Elliptic and hyperelliptic curve models and brute-force point counts over F_{q^n}."""

from __future__ import annotations

from dataclasses import dataclass, replace
import json
import logging
import re
from typing import TYPE_CHECKING, Any, Sequence, Union

import numpy as np

from .errors import EvenCharacteristic, GenusZero, InvalidParams, SingularCurve, SpecSyntaxError, WeilViolation
from .fields import (
    DEFAULT_ENUMERATION_BUDGET,
    FieldDesc,
    FieldElement,
    check_budget,
    log_tables,
    make_extension,
    parse_field,
    parse_int_literal,
    poly_derivative,
    poly_gcd,
)
from .parallel import map_chunks

if TYPE_CHECKING:
    from .cache import CacheStore

logger = logging.getLogger("mobius_frobenius")
if logger.level == logging.NOTSET:
    logger.setLevel(logging.INFO)


@dataclass(frozen=True)
class Elliptic:
    """y² = x³ + a·x + b"""

    a: FieldElement
    b: FieldElement


@dataclass(frozen=True)
class Hyperelliptic:
    """y² = f(x), coefficients constant term first."""

    f: tuple[FieldElement, ...]


@dataclass(frozen=True)
class CurveSpec:
    base: FieldDesc
    kind: Union[Elliptic, Hyperelliptic]
    genus: int = 0

    @property
    def q(self) -> int:
        return self.base.order

    def polynomial(self) -> tuple[FieldElement, ...]:
        """Right-hand side f(x) of y² = f(x), trailing zeros stripped."""
        if isinstance(self.kind, Elliptic):
            zero, one = self.base.zero(), self.base.one()
            return (self.kind.b, self.kind.a, zero, one)
        coeffs = list(self.kind.f)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        return tuple(coeffs)

    @property
    def spec_string(self) -> str:
        """Canonical string, also the cache key."""

        def coeffs(x: FieldElement) -> list[int]:
            return list(x.coeffs)

        if isinstance(self.kind, Elliptic):
            a = json.dumps(coeffs(self.kind.a), separators=(",", ":"))
            b = json.dumps(coeffs(self.kind.b), separators=(",", ":"))
            return f"elliptic {self.base.spec} a={a} b={b}"
        f = [coeffs(c) if self.base.m > 1 else c.coeffs[0] for c in self.kind.f]
        return f"hyperelliptic {self.base.spec} f={json.dumps(f, separators=(',', ':'))}"


@dataclass(frozen=True)
class CountRecord:
    n: int
    count: int
    trace: int


def elliptic(base: FieldDesc, a: Any, b: Any) -> CurveSpec:
    return validate(CurveSpec(base, Elliptic(base.element(a), base.element(b))))


def hyperelliptic(base: FieldDesc, f: Sequence[Any]) -> CurveSpec:
    return validate(CurveSpec(base, Hyperelliptic(tuple(base.element(c) for c in f))))


def validate(spec: CurveSpec) -> CurveSpec:
    """Reject singular or degenerate models and fill in the genus."""
    K = spec.base
    if K.p == 2:
        raise EvenCharacteristic("Curve models require odd characteristic.")
    if isinstance(spec.kind, Elliptic):
        a, b = spec.kind.a, spec.kind.b
        if (4 * a**3 + 27 * b**2).is_zero():
            raise SingularCurve(f"Discriminant 4a³ + 27b² vanishes over {K.spec}.")
        return replace(spec, genus=1)

    f = [c.coeffs for c in spec.polynomial()]
    degree = len(f) - 1
    if degree <= 2:
        raise GenusZero(f"deg f = {max(degree, 0)} gives genus 0.")
    if len(poly_gcd(K, f, poly_derivative(K, f))) > 1:
        raise SingularCurve("f is not squarefree: gcd(f, f') is non-constant.")
    return replace(spec, genus=(degree - 1) // 2)


CURVE_GRAMMAR = (
    "curve := 'elliptic <field> a=<coeff> b=<coeff>' | 'hyperelliptic <field> f=[<coeff>,...]'; "
    "field := p^m or p^m/[c0,...,cm]; coeff := integer or [integer,...]"
)

_COEFF = r"(\[[^=]*\]|-?\d+)"
_ELLIPTIC = re.compile(rf"^\s*elliptic\s+(\S+)\s+a\s*=\s*{_COEFF}\s+b\s*=\s*{_COEFF}\s*$")
_HYPER = re.compile(r"^\s*hyperelliptic\s+(\S+)\s+f\s*=\s*(\[.*\])\s*$")


def parse_curve(text: str) -> CurveSpec:
    """Parse ``"elliptic p^m a=[..] b=[..]"`` or ``"hyperelliptic p^m f=[c0,c1,...]"``."""
    match = _ELLIPTIC.match(text)
    if match:
        base = parse_field(match.group(1))
        a = parse_int_literal(match.group(2), "a", 1)
        b = parse_int_literal(match.group(3), "b", 1)
        return elliptic(base, a, b)
    match = _HYPER.match(text)
    if match:
        base = parse_field(match.group(1))
        f = parse_int_literal(match.group(2), "f", 2)
        if not f:
            raise SpecSyntaxError("f=[] has no coefficients.")
        return hyperelliptic(base, f)
    raise SpecSyntaxError(f"Malformed curve specification {text!r}.")


def count_points(
    spec: CurveSpec,
    n: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
    seed_poly: Sequence[Any] | None = None,
) -> CountRecord:
    """#C(F_{q^n}) on the smooth projective model, by enumerating x ∈ F_{q^n}."""
    if n < 1:
        raise InvalidParams("Extension degree n must be positive.")
    if spec.genus < 1:
        spec = validate(spec)
    Q = spec.q**n
    check_budget(Q, budget, "point count")

    ext = make_extension(spec.base, n, seed_poly)
    tables = log_tables(ext, budget)
    f = spec.polynomial()
    coeffs = [ext.encode(ext.embed_raw(c.coeffs)) for c in f]

    def partial(lo: int, hi: int) -> int:
        x = np.arange(lo, hi, dtype=np.int64)
        return int(tables.quadratic_character(tables.horner(coeffs, x)).sum())

    chi_sum = sum(map_chunks(partial, 0, Q, workers))
    if isinstance(spec.kind, Elliptic) or (len(f) - 1) % 2 == 1:
        infinity = 1
    else:
        infinity = 1 + int(tables.quadratic_character(np.array([coeffs[-1]]))[0])

    count = Q + chi_sum + infinity
    trace = Q + 1 - count
    if trace * trace > 4 * spec.genus**2 * Q:
        raise WeilViolation(f"|A_C({n})| = {abs(trace)} exceeds 2g·q^(n/2) for {spec.spec_string}.")
    logger.info("Counted %s over degree %s: #C = %s, A_C = %s.", spec.spec_string, n, count, trace)
    return CountRecord(n, count, trace)


def trace_sequence(
    spec: CurveSpec,
    n_max: int,
    store: "CacheStore | None" = None,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
) -> list[CountRecord]:
    """Records for n = 1..n_max, read from and written to ``store`` when given."""
    if n_max <= 0:
        return []
    check_budget(spec.q**n_max, budget, "point count")
    if store is None:
        return [count_points(spec, n, budget, workers) for n in range(1, n_max + 1)]
    from .cache import cache_get_or_count

    return [cache_get_or_count(store, spec, n, budget, workers) for n in range(1, n_max + 1)]


def normalised_trace(record: CountRecord, genus: int, q: int) -> float:
    """a_C(n) = A_C(n) / (2g·q^{n/2})."""
    return record.trace / (2 * genus * q ** (record.n / 2))
