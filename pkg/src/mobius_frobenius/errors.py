"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MobiusFrobeniusError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


# fields
class NonPrimeP(MobiusFrobeniusError, ValueError):
    pass


class ReduciblePoly(MobiusFrobeniusError, ValueError):
    pass


class OwnerMismatch(MobiusFrobeniusError, TypeError):
    pass


class DivisionByZero(MobiusFrobeniusError, ZeroDivisionError):
    pass


class EvenCharacteristic(MobiusFrobeniusError, ValueError):
    pass


class BudgetExceeded(MobiusFrobeniusError, ValueError):
    pass


# curves
class SingularCurve(MobiusFrobeniusError, ValueError):
    pass


class GenusZero(MobiusFrobeniusError, ValueError):
    pass


class WeilViolation(MobiusFrobeniusError, ArithmeticError):
    """A computed quantity breaks a Weil bound; signals a counting bug."""


# zeta
class NonIntegerCoefficient(MobiusFrobeniusError, ArithmeticError):
    pass


class SymmetryViolation(MobiusFrobeniusError, ArithmeticError):
    pass


class PrecisionExhausted(MobiusFrobeniusError, ArithmeticError):
    """Certification failed at the requested precision; retry with more bits."""


class ClusteredRoots(MobiusFrobeniusError, ArithmeticError):
    pass


# diophantine
class ZeroInterval(MobiusFrobeniusError, ValueError):
    pass


class InsufficientPrecision(MobiusFrobeniusError, ArithmeticError):
    pass


class RationalDetected(MobiusFrobeniusError, ArithmeticError):
    """The input is rational within its certified expansion."""


# bounds / charsums / cli
class InvalidParams(MobiusFrobeniusError, ValueError):
    pass


class SpecSyntaxError(InvalidParams):
    """Malformed curve or field text; the CLI treats it as a usage error (exit 2)."""


class DegenerateR(MobiusFrobeniusError, ValueError):
    pass


class CacheCorrupt(MobiusFrobeniusError, ValueError):
    pass
