"""Frobenius traces of curves over finite fields and Möbius-weighted sums over them."""

from .config import RunConfig
from .curves import CountRecord, CurveSpec, count_points, parse_curve, trace_sequence
from .errors import MobiusFrobeniusError
from .fields import make_extension, make_field
from .mobius import mobius_exponential_sum, mobius_frobenius_sum, sieve
from .zeta import certified_spectrum, compute_spectrum, reconstruct_l_polynomial

__all__ = [
    "CountRecord",
    "CurveSpec",
    "MobiusFrobeniusError",
    "RunConfig",
    "certified_spectrum",
    "compute_spectrum",
    "count_points",
    "make_extension",
    "make_field",
    "mobius_exponential_sum",
    "mobius_frobenius_sum",
    "parse_curve",
    "reconstruct_l_polynomial",
    "sieve",
    "trace_sequence",
]
