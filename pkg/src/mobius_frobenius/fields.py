"""Exact arithmetic in F_q = F_p[t]/(m(t)) and in towers F_{q^n} = F_q[u]/(M(u)).

Scalar arithmetic works on immutable coefficient tuples. The vectorised layer
(:class:`LogTables`) encodes every element of a field as an integer in
``[0, q^n)`` (base-p digits of the flattened coefficient vector, constant term
least significant) and multiplies through discrete-log tables.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property, lru_cache
import json
import logging
from math import isqrt
import re
from typing import Any, Iterator, Sequence

import numpy as np
from sympy import factorint, isprime

from .errors import (
    BudgetExceeded,
    DivisionByZero,
    EvenCharacteristic,
    InvalidParams,
    NonPrimeP,
    OwnerMismatch,
    ReduciblePoly,
    SpecSyntaxError,
)

logger = logging.getLogger("mobius_frobenius")
if logger.level == logging.NOTSET:
    logger.setLevel(logging.INFO)

DEFAULT_ENUMERATION_BUDGET = 10**8

Raw = Any  # tuple[int, ...] for F_q, tuple[tuple[int, ...], ...] for towers


class FiniteField(ABC):
    """Operations shared by prime-power fields and their tower extensions."""

    p: int

    @property
    @abstractmethod
    def degree(self) -> int:
        """Degree over the immediate base field."""

    @property
    @abstractmethod
    def abs_degree(self) -> int:
        """Degree over F_p."""

    @property
    @abstractmethod
    def base_order(self) -> int:
        """Size of the immediate base field."""

    @property
    @abstractmethod
    def spec(self) -> str:
        ...

    @abstractmethod
    def zero_raw(self) -> Raw: ...

    @abstractmethod
    def one_raw(self) -> Raw: ...

    @abstractmethod
    def add_raw(self, a: Raw, b: Raw) -> Raw: ...

    @abstractmethod
    def sub_raw(self, a: Raw, b: Raw) -> Raw: ...

    @abstractmethod
    def mul_raw(self, a: Raw, b: Raw) -> Raw: ...

    @abstractmethod
    def from_int_raw(self, k: int) -> Raw: ...

    @abstractmethod
    def coerce_raw(self, value: Any) -> Raw: ...

    @abstractmethod
    def flatten(self, a: Raw) -> tuple[int, ...]: ...

    @abstractmethod
    def unflatten(self, digits: Sequence[int]) -> Raw: ...

    @property
    def order(self) -> int:
        return self.p**self.abs_degree

    def neg_raw(self, a: Raw) -> Raw:
        return self.sub_raw(self.zero_raw(), a)

    def is_zero_raw(self, a: Raw) -> bool:
        return a == self.zero_raw()

    def pow_raw(self, a: Raw, k: int) -> Raw:
        if k < 0:
            return self.pow_raw(self.inv_raw(a), -k)
        result = self.one_raw()
        while k:
            if k & 1:
                result = self.mul_raw(result, a)
            k >>= 1
            if k:
                a = self.mul_raw(a, a)
        return result

    def inv_raw(self, a: Raw) -> Raw:
        if self.is_zero_raw(a):
            raise DivisionByZero(f"Inverse of zero in {self.spec}.")
        return self.pow_raw(a, self.order - 2)

    def encode(self, a: Raw) -> int:
        value = 0
        for digit in reversed(self.flatten(a)):
            value = value * self.p + digit
        return value

    def decode(self, k: int) -> Raw:
        digits = []
        for _ in range(self.abs_degree):
            k, digit = divmod(k, self.p)
            digits.append(digit)
        return self.unflatten(digits)

    # element-level API
    def element(self, value: Any) -> "FieldElement":
        return FieldElement(self.coerce_raw(value), self)

    def zero(self) -> "FieldElement":
        return FieldElement(self.zero_raw(), self)

    def one(self) -> "FieldElement":
        return FieldElement(self.one_raw(), self)

    def from_int(self, k: int) -> "FieldElement":
        return FieldElement(self.from_int_raw(k), self)

    def basis(self) -> list[Raw]:
        n = self.abs_degree
        return [self.unflatten([1 if j == i else 0 for j in range(n)]) for i in range(n)]


def _reduce_mod_p(coeffs: Sequence[int], p: int) -> tuple[int, ...]:
    return tuple(int(c) % p for c in coeffs)


@dataclass(frozen=True)
class FieldDesc(FiniteField):
    """F_q with q = p^m, elements are polynomials of degree < m over F_p."""

    p: int
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isprime(self.p):
            raise NonPrimeP(f"{self.p} is not prime.")
        if self.m < 1:
            raise InvalidParams("Field degree m must be at least 1.")
        modulus = _reduce_mod_p(self.modulus, self.p)
        if len(modulus) != self.m + 1 or modulus[-1] != 1:
            raise InvalidParams(f"Modulus must be monic of degree {self.m}: {list(self.modulus)}.")
        object.__setattr__(self, "modulus", modulus)
        if self.m > 1:
            prime = self.prime_field
            poly = [prime.coerce_raw(c) for c in modulus]
            if not is_irreducible(prime, poly):
                raise ReduciblePoly(f"{list(modulus)} is reducible over F_{self.p}.")

    @property
    def degree(self) -> int:
        return self.m

    @property
    def abs_degree(self) -> int:
        return self.m

    @property
    def base_order(self) -> int:
        return self.p

    @property
    def q(self) -> int:
        return self.order

    @cached_property
    def prime_field(self) -> "FieldDesc":
        if self.m == 1:
            return self
        return FieldDesc(self.p, 1, (0, 1))

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.m}/[{','.join(str(c) for c in self.modulus)}]"

    def zero_raw(self) -> Raw:
        return (0,) * self.m

    def one_raw(self) -> Raw:
        return (1,) + (0,) * (self.m - 1)

    def from_int_raw(self, k: int) -> Raw:
        return (k % self.p,) + (0,) * (self.m - 1)

    def coerce_raw(self, value: Any) -> Raw:
        if isinstance(value, FieldElement):
            if value.owner != self:
                raise OwnerMismatch(f"Element of {value.owner.spec} used in {self.spec}.")
            return value.coeffs
        if isinstance(value, (int, np.integer)):
            return self.from_int_raw(int(value))
        coeffs = list(value)
        if len(coeffs) > self.m:
            raise InvalidParams(f"Too many coefficients for {self.spec}: {coeffs}.")
        coeffs = coeffs + [0] * (self.m - len(coeffs))
        return _reduce_mod_p(coeffs, self.p)

    def add_raw(self, a: Raw, b: Raw) -> Raw:
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub_raw(self, a: Raw, b: Raw) -> Raw:
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def mul_raw(self, a: Raw, b: Raw) -> Raw:
        p, m, modulus = self.p, self.m, self.modulus
        if m == 1:
            return ((a[0] * b[0]) % p,)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(m):
                    prod[k - m + j] -= c * modulus[j]
        return tuple(v % p for v in prod[:m])

    def flatten(self, a: Raw) -> tuple[int, ...]:
        return tuple(a)

    def unflatten(self, digits: Sequence[int]) -> Raw:
        return tuple(int(d) for d in digits)


@dataclass(frozen=True)
class ExtensionDesc(FiniteField):
    """F_{q^n} as F_q[u]/(M(u)); elements are degree < n polynomials over F_q."""

    base: FieldDesc
    n: int
    modulus: tuple[Raw, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidParams("Extension degree n must be at least 1.")
        modulus = tuple(self.base.coerce_raw(c) for c in self.modulus)
        if len(modulus) != self.n + 1 or modulus[-1] != self.base.one_raw():
            raise InvalidParams(f"Extension modulus must be monic of degree {self.n}.")
        object.__setattr__(self, "modulus", modulus)
        if self.n > 1 and not is_irreducible(self.base, list(modulus)):
            raise ReduciblePoly(f"Extension modulus is reducible over {self.base.spec}.")

    @property
    def p(self) -> int:  # type: ignore[override]
        return self.base.p

    @property
    def degree(self) -> int:
        return self.n

    @property
    def abs_degree(self) -> int:
        return self.n * self.base.m

    @property
    def base_order(self) -> int:
        return self.base.order

    @property
    def spec(self) -> str:
        coeffs = json.dumps([list(c) for c in self.modulus], separators=(",", ":"))
        return f"{self.base.spec}|{self.n}/{coeffs}"

    def zero_raw(self) -> Raw:
        return (self.base.zero_raw(),) * self.n

    def one_raw(self) -> Raw:
        return (self.base.one_raw(),) + (self.base.zero_raw(),) * (self.n - 1)

    def from_int_raw(self, k: int) -> Raw:
        return (self.base.from_int_raw(k),) + (self.base.zero_raw(),) * (self.n - 1)

    def embed_raw(self, c: Raw) -> Raw:
        return (tuple(c),) + (self.base.zero_raw(),) * (self.n - 1)

    def embed(self, c: "FieldElement") -> "FieldElement":
        if c.owner != self.base:
            raise OwnerMismatch(f"Element of {c.owner.spec} is not in {self.base.spec}.")
        return FieldElement(self.embed_raw(c.coeffs), self)

    def coerce_raw(self, value: Any) -> Raw:
        if isinstance(value, FieldElement):
            if value.owner == self.base:
                return self.embed_raw(value.coeffs)
            if value.owner != self:
                raise OwnerMismatch(f"Element of {value.owner.spec} used in {self.spec}.")
            return value.coeffs
        if isinstance(value, (int, np.integer)):
            return self.from_int_raw(int(value))
        coeffs = list(value)
        if len(coeffs) > self.n:
            raise InvalidParams(f"Too many coefficients for degree-{self.n} extension.")
        coeffs = coeffs + [0] * (self.n - len(coeffs))
        return tuple(self.base.coerce_raw(c) for c in coeffs)

    def add_raw(self, a: Raw, b: Raw) -> Raw:
        add = self.base.add_raw
        return tuple(add(x, y) for x, y in zip(a, b))

    def sub_raw(self, a: Raw, b: Raw) -> Raw:
        sub = self.base.sub_raw
        return tuple(sub(x, y) for x, y in zip(a, b))

    def mul_raw(self, a: Raw, b: Raw) -> Raw:
        base, n = self.base, self.n
        zero = base.zero_raw()
        prod = [zero] * (2 * n - 1)
        for i, x in enumerate(a):
            if x == zero:
                continue
            for j, y in enumerate(b):
                if y != zero:
                    prod[i + j] = base.add_raw(prod[i + j], base.mul_raw(x, y))
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if c != zero:
                for j in range(n):
                    prod[k - n + j] = base.sub_raw(prod[k - n + j], base.mul_raw(c, self.modulus[j]))
        return tuple(prod[:n])

    def flatten(self, a: Raw) -> tuple[int, ...]:
        return tuple(d for c in a for d in c)

    def unflatten(self, digits: Sequence[int]) -> Raw:
        m = self.base.m
        return tuple(tuple(int(d) for d in digits[i * m : (i + 1) * m]) for i in range(self.n))


@dataclass(frozen=True)
class FieldElement:
    coeffs: Raw
    owner: FiniteField

    def _other(self, other: Any) -> Raw:
        if isinstance(other, FieldElement):
            if other.owner != self.owner:
                raise OwnerMismatch(
                    f"Cannot combine elements of {self.owner.spec} and {other.owner.spec}."
                )
            return other.coeffs
        if isinstance(other, (int, np.integer)):
            return self.owner.from_int_raw(int(other))
        return NotImplemented

    def _wrap(self, raw: Raw) -> "FieldElement":
        return FieldElement(raw, self.owner)

    def __add__(self, other: Any) -> "FieldElement":
        raw = self._other(other)
        if raw is NotImplemented:
            return NotImplemented
        return self._wrap(self.owner.add_raw(self.coeffs, raw))

    __radd__ = __add__

    def __sub__(self, other: Any) -> "FieldElement":
        raw = self._other(other)
        if raw is NotImplemented:
            return NotImplemented
        return self._wrap(self.owner.sub_raw(self.coeffs, raw))

    def __rsub__(self, other: Any) -> "FieldElement":
        raw = self._other(other)
        if raw is NotImplemented:
            return NotImplemented
        return self._wrap(self.owner.sub_raw(raw, self.coeffs))

    def __neg__(self) -> "FieldElement":
        return self._wrap(self.owner.neg_raw(self.coeffs))

    def __mul__(self, other: Any) -> "FieldElement":
        raw = self._other(other)
        if raw is NotImplemented:
            return NotImplemented
        return self._wrap(self.owner.mul_raw(self.coeffs, raw))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "FieldElement":
        raw = self._other(other)
        if raw is NotImplemented:
            return NotImplemented
        return self._wrap(self.owner.mul_raw(self.coeffs, self.owner.inv_raw(raw)))

    def __pow__(self, k: int) -> "FieldElement":
        return self._wrap(self.owner.pow_raw(self.coeffs, k))

    def __bool__(self) -> bool:
        return not self.owner.is_zero_raw(self.coeffs)

    def is_zero(self) -> bool:
        return self.owner.is_zero_raw(self.coeffs)

    def encode(self) -> int:
        return self.owner.encode(self.coeffs)

    def __repr__(self) -> str:
        return f"FieldElement({list(self.owner.flatten(self.coeffs))} in {self.owner.spec})"


# ---------------------------------------------------------------------------
# polynomials over a field (lists of raw coefficients, constant term first)


def _trim(K: FiniteField, f: list[Raw]) -> list[Raw]:
    zero = K.zero_raw()
    while f and f[-1] == zero:
        f = f[:-1]
    return f


def poly_add(K: FiniteField, f: list[Raw], g: list[Raw]) -> list[Raw]:
    zero = K.zero_raw()
    n = max(len(f), len(g))
    f = f + [zero] * (n - len(f))
    g = g + [zero] * (n - len(g))
    return _trim(K, [K.add_raw(a, b) for a, b in zip(f, g)])


def poly_sub(K: FiniteField, f: list[Raw], g: list[Raw]) -> list[Raw]:
    return poly_add(K, f, [K.neg_raw(c) for c in g])


def poly_mul(K: FiniteField, f: list[Raw], g: list[Raw]) -> list[Raw]:
    if not f or not g:
        return []
    zero = K.zero_raw()
    out = [zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a == zero:
            continue
        for j, b in enumerate(g):
            if b != zero:
                out[i + j] = K.add_raw(out[i + j], K.mul_raw(a, b))
    return _trim(K, out)


def poly_divmod(K: FiniteField, f: list[Raw], g: list[Raw]) -> tuple[list[Raw], list[Raw]]:
    g = _trim(K, g)
    if not g:
        raise DivisionByZero("Polynomial division by zero.")
    f = _trim(K, list(f))
    zero = K.zero_raw()
    inv_lead = K.inv_raw(g[-1])
    quotient = [zero] * max(len(f) - len(g) + 1, 0)
    while len(f) >= len(g):
        shift = len(f) - len(g)
        c = K.mul_raw(f[-1], inv_lead)
        quotient[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = K.sub_raw(f[shift + i], K.mul_raw(c, b))
        f = _trim(K, f)
    return _trim(K, quotient), f


def poly_mod(K: FiniteField, f: list[Raw], g: list[Raw]) -> list[Raw]:
    return poly_divmod(K, f, g)[1]


def poly_gcd(K: FiniteField, f: list[Raw], g: list[Raw]) -> list[Raw]:
    """Monic gcd."""
    f, g = _trim(K, list(f)), _trim(K, list(g))
    while g:
        f, g = g, poly_mod(K, f, g)
    if not f:
        return []
    inv_lead = K.inv_raw(f[-1])
    return [K.mul_raw(c, inv_lead) for c in f]


def poly_powmod(K: FiniteField, f: list[Raw], e: int, modulus: list[Raw]) -> list[Raw]:
    result = [K.one_raw()]
    f = poly_mod(K, f, modulus)
    while e:
        if e & 1:
            result = poly_mod(K, poly_mul(K, result, f), modulus)
        e >>= 1
        if e:
            f = poly_mod(K, poly_mul(K, f, f), modulus)
    return result


def poly_derivative(K: FiniteField, f: list[Raw]) -> list[Raw]:
    return _trim(K, [K.mul_raw(K.from_int_raw(i), c) for i, c in enumerate(f)][1:])


def poly_eval(K: FiniteField, f: Sequence[Raw], x: Raw) -> Raw:
    acc = K.zero_raw()
    for c in reversed(f):
        acc = K.add_raw(K.mul_raw(acc, x), c)
    return acc


def is_irreducible(K: FiniteField, f: list[Raw]) -> bool:
    """Rabin's test over K."""
    f = _trim(K, list(f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [K.zero_raw(), K.one_raw()]
    frobenius_powers = {}
    h = x
    for k in range(1, n + 1):
        h = poly_powmod(K, h, K.order, f)
        frobenius_powers[k] = h
    if _trim(K, poly_sub(K, frobenius_powers[n], x)):
        return False
    for r in factorint(n):
        g = poly_gcd(K, poly_sub(K, frobenius_powers[n // r], x), f)
        if len(g) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# construction


def _least_irreducible(K: FiniteField, n: int) -> list[Raw]:
    Q = K.order
    for k in range(Q**n):
        coeffs = [K.decode((k // Q**i) % Q) for i in range(n)] + [K.one_raw()]
        if is_irreducible(K, coeffs):
            return coeffs
    raise ArithmeticError(f"No irreducible polynomial of degree {n} found.")  # unreachable


@lru_cache(maxsize=64)
def _make_field(p: int, m: int, seed: tuple[int, ...] | None) -> FieldDesc:
    if not isprime(p):
        raise NonPrimeP(f"{p} is not prime.")
    if m < 1:
        raise InvalidParams("Field degree m must be at least 1.")
    if seed is not None:
        return FieldDesc(p, m, seed)
    if m == 1:
        return FieldDesc(p, 1, (0, 1))
    prime = FieldDesc(p, 1, (0, 1))
    modulus = _least_irreducible(prime, m)
    return FieldDesc(p, m, tuple(c[0] for c in modulus))


def make_field(p: int, m: int = 1, seed_poly: Sequence[int] | None = None) -> FieldDesc:
    """F_{p^m}; without ``seed_poly`` the modulus is the least monic irreducible."""
    seed = tuple(int(c) for c in seed_poly) if seed_poly is not None else None
    return _make_field(int(p), int(m), seed)


@lru_cache(maxsize=64)
def _make_extension(base: FieldDesc, n: int, seed: tuple[Raw, ...] | None) -> ExtensionDesc:
    if seed is not None:
        return ExtensionDesc(base, n, seed)
    if n == 1:
        return ExtensionDesc(base, 1, (base.zero_raw(), base.one_raw()))
    return ExtensionDesc(base, n, tuple(_least_irreducible(base, n)))


def make_extension(base: FieldDesc, n: int, seed_poly: Sequence[Any] | None = None) -> ExtensionDesc:
    """F_{q^n} over ``base``; the modulus search mirrors :func:`make_field`."""
    if n < 1:
        raise InvalidParams("Extension degree n must be at least 1.")
    seed = tuple(base.coerce_raw(c) for c in seed_poly) if seed_poly is not None else None
    return _make_extension(base, int(n), seed)


_FIELD_SPEC = re.compile(r"^\s*(\d+)(?:\^(\d+))?\s*(?:/\s*(\[[^\]]*\]))?\s*$")


def parse_int_literal(text: str, label: str, depth: int) -> Any:
    """Decode a JSON integer or integer list nested at most ``depth`` lists deep."""
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecSyntaxError(f"{label}={text} is not a valid literal: {exc.msg} (column {exc.colno}).") from None

    def integral(v: Any, d: int) -> bool:
        if isinstance(v, bool):
            return False
        if isinstance(v, int):
            return True
        return d > 0 and isinstance(v, list) and all(integral(x, d - 1) for x in v)

    if not integral(value, depth):
        raise SpecSyntaxError(f"{label}={text} must contain integers only, nested at most {depth} deep.")
    return value


def parse_field(text: str) -> FieldDesc:
    """Parse ``"p^m"`` or ``"p^m/[c0,...,cm]"``."""
    match = _FIELD_SPEC.match(text)
    if not match:
        raise SpecSyntaxError(f"Malformed field specification {text!r}; expected 'p^m/[c0,...]'.")
    p = int(match.group(1))
    m = int(match.group(2) or 1)
    seed = parse_int_literal(match.group(3), "modulus", 1) if match.group(3) else None
    return make_field(p, m, seed)


# ---------------------------------------------------------------------------
# spec-level operations


def arith(a: FieldElement, b: FieldElement, op: str, k: int | None = None) -> FieldElement:
    if op == "pow":
        if k is None:
            raise InvalidParams("pow requires an exponent k.")
        return a**k
    if not isinstance(b, FieldElement) or a.owner != b.owner:
        raise OwnerMismatch("Operands belong to different fields.")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise InvalidParams(f"Unknown operation {op!r}.")


def trace_to_base(x: FieldElement) -> FieldElement:
    """Tr_{F_{q^n}/F_q}(x) for tower elements, Tr_{F_q/F_p}(x) for base elements."""
    K = x.owner
    if isinstance(K, ExtensionDesc):
        acc, y = K.zero_raw(), x.coeffs
        for _ in range(K.n):
            acc = K.add_raw(acc, y)
            y = K.pow_raw(y, K.base_order)
        if any(c != K.base.zero_raw() for c in acc[1:]):
            raise ArithmeticError("Trace left the base field; modulus is inconsistent.")
        return FieldElement(acc[0], K.base)
    if isinstance(K, FieldDesc):
        return K.prime_field.from_int(trace_to_prime(x))
    raise OwnerMismatch("Element does not belong to a known field.")


def trace_to_prime(x: FieldElement) -> int:
    """Σ x^{p^i} over the full degree of the owning field over F_p."""
    K = x.owner
    acc, y = K.zero_raw(), x.coeffs
    for _ in range(K.abs_degree):
        acc = K.add_raw(acc, y)
        y = K.pow_raw(y, K.p)
    digits = K.flatten(acc)
    if any(digits[1:]):
        raise ArithmeticError("Trace left the prime field; modulus is inconsistent.")
    return digits[0]


def quadratic_character(x: FieldElement) -> int:
    K = x.owner
    if K.p == 2:
        raise EvenCharacteristic("Quadratic character needs odd characteristic.")
    if x.is_zero():
        return 0
    r = K.pow_raw(x.coeffs, (K.order - 1) // 2)
    if r == K.one_raw():
        return 1
    if r == K.neg_raw(K.one_raw()):
        return -1
    raise ArithmeticError(f"x^((q-1)/2) is not ±1 in {K.spec}.")


def check_budget(size: int, budget: int, what: str = "enumeration") -> None:
    if size > budget:
        raise BudgetExceeded(f"{what} of {size} elements exceeds the budget of {budget}.")


def enumerate_field(field: FiniteField, budget: int = DEFAULT_ENUMERATION_BUDGET) -> Iterator[FieldElement]:
    """Every element once, ordered by integer encoding (constant term fastest)."""
    check_budget(field.order, budget)
    for k in range(field.order):
        yield FieldElement(field.decode(k), field)


# ---------------------------------------------------------------------------
# vectorised layer


def primitive_element(field: FiniteField) -> Raw:
    """Least element (by encoding) generating F^*."""
    Q = field.order
    primes = list(factorint(Q - 1))
    one = field.one_raw()
    for k in range(1, Q):
        g = field.decode(k)
        if all(field.pow_raw(g, (Q - 1) // r) != one for r in primes):
            return g
    raise ArithmeticError(f"No primitive element in {field.spec}.")  # unreachable


def multiplication_matrix(field: FiniteField, c: Raw, dtype: Any = np.float64) -> np.ndarray:
    """Matrix of x ↦ c·x on flattened F_p digit vectors (column convention)."""
    basis = field.basis()
    columns = [field.flatten(field.mul_raw(c, b)) for b in basis]
    return np.array(columns, dtype=dtype).T


_FLOAT_EXACT = 2**53
_INT64_EXACT = 2**63


def exact_dtype(p: int, N: int) -> Any:
    """Narrowest dtype whose matrix products of digits mod p stay exact."""
    worst = (p - 1) ** 2 * N
    if worst < _FLOAT_EXACT:
        return np.float64
    if worst < _INT64_EXACT:
        return np.int64
    return object


@dataclass(frozen=True, eq=False)
class LogTables:
    field: FiniteField
    generator: int
    exp: np.ndarray
    log: np.ndarray
    powers: np.ndarray

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def order(self) -> int:
        return self.field.order

    def digits(self, enc: np.ndarray) -> np.ndarray:
        return (np.asarray(enc, dtype=np.int64)[..., None] // self.powers) % self.p

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.powers

    def add(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        return self.encode((self.digits(a) + self.digits(b)) % self.p)

    def sub(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        return self.encode((self.digits(a) - self.digits(b)) % self.p)

    def mul(self, a: np.ndarray, b: np.ndarray | int) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a: np.ndarray) -> np.ndarray:
        """Inverse of nonzero entries; zero entries map to zero."""
        a = np.asarray(a, dtype=np.int64)
        out = self.exp[(-self.log[a]) % (self.order - 1)]
        return np.where(a == 0, 0, out)

    def horner(self, coeffs: Sequence[int], x: np.ndarray) -> np.ndarray:
        """Evaluate Σ coeffs[i]·x^i, coefficients given as encodings."""
        acc = np.full(np.shape(x), coeffs[-1], dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            acc = self.mul(acc, x)
            if c:
                acc = self.add(acc, c)
        return acc

    def quadratic_character(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        chi = 1 - 2 * (self.log[v] & 1)
        return np.where(v == 0, 0, chi)

    def functional(self, a: np.ndarray, vector: np.ndarray) -> np.ndarray:
        """Apply an F_p-linear functional given by its values on the basis."""
        return (self.digits(a) @ vector) % self.p


@lru_cache(maxsize=4)
def _build_tables(field: FiniteField) -> LogTables:
    p, N, Q = field.p, field.abs_degree, field.order
    powers = np.array([p**i for i in range(N)], dtype=np.int64)
    g = primitive_element(field)
    logger.info("Building log tables for %s (q=%s, generator=%s).", field.spec, Q, field.encode(g))

    block = isqrt(Q - 1) + 1
    dtype = exact_dtype(p, N)
    Mg = multiplication_matrix(field, g, dtype)
    rows = np.empty((block, N), dtype=dtype)
    v = np.array(field.flatten(field.one_raw()), dtype=dtype)
    for k in range(block):
        rows[k] = v
        v = (Mg @ v) % p
    step = multiplication_matrix(field, field.pow_raw(g, block), dtype)

    n_blocks = -(-(Q - 1) // block)
    exp = np.empty(n_blocks * block, dtype=np.int64)
    M = np.eye(N, dtype=dtype)
    for j in range(n_blocks):
        chunk = (rows @ M.T) % p
        chunk = (np.rint(chunk) if dtype is np.float64 else chunk).astype(np.int64)
        exp[j * block : (j + 1) * block] = chunk @ powers
        M = (step @ M) % p
    exp = exp[: Q - 1]

    log = np.full(Q, -1, dtype=np.int64)
    log[exp] = np.arange(Q - 1, dtype=np.int64)
    if log[0] != -1 or np.count_nonzero(log >= 0) != Q - 1:
        raise ArithmeticError(f"Log table for {field.spec} is not a bijection.")
    return LogTables(field, field.encode(g), exp, log, powers)


def log_tables(field: FiniteField, budget: int = DEFAULT_ENUMERATION_BUDGET) -> LogTables:
    check_budget(field.order, budget, "log table")
    return _build_tables(field)
