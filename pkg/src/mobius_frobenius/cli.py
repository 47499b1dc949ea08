"""Command-line driver: ``python scripts/mobius_frobenius.py <command> ...``."""

from __future__ import annotations

import argparse
from dataclasses import replace
from fractions import Fraction
import logging
from pathlib import Path
import re
import sys
from typing import Sequence, TextIO

from dotenv import load_dotenv
import mpmath
import pandas as pd

from . import bounds, charsums, diophantine, mobius, zeta
from .cache import CacheStore, cache_get_or_count
from .config import OUTPUT_FORMATS, RunConfig
from .curves import CURVE_GRAMMAR, CurveSpec, normalised_trace, parse_curve, trace_sequence
from .errors import InvalidParams, MobiusFrobeniusError, SpecSyntaxError
from .precision import Ball, parse_real
from .report import write_json, write_table

logger = logging.getLogger("mobius_frobenius")
if logger.level == logging.NOTSET:
    logger.setLevel(logging.INFO)

__all__ = ["CacheStore", "cache_get_or_count", "build_parser", "main", "run"]

_ANGLE_REF = re.compile(r"^\s*angle\s+(\d+)\s+of\s+curve\s+(.+)$")


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(v)) if "e" in v.lower() else int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _global_options() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("global options")
    group.add_argument("--precision-bits", type=int, default=argparse.SUPPRESS, help="Working precision in bits (MF_PRECISION_BITS).")
    group.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="Field enumeration budget (MF_ENUMERATION_BUDGET).")
    group.add_argument("--sieve-limit", type=int, default=argparse.SUPPRESS, help="Largest N the Möbius sieve may reach (MF_SIEVE_LIMIT).")
    group.add_argument("--format", choices=OUTPUT_FORMATS, default=argparse.SUPPRESS, help="Report format for tabular commands (MF_OUTPUT_FORMAT).")
    group.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="Worker threads for enumeration and sums (MF_WORKERS).")
    group.add_argument("--cache-path", default=argparse.SUPPRESS, help="Point-count cache file (MF_CACHE_PATH).")
    group.add_argument("--slack", type=float, default=argparse.SUPPRESS, help="Slack constant for bound right-hand sides (MF_SLACK_CONSTANT).")
    group.add_argument("--log-level", default=argparse.SUPPRESS, help="Logging level on stderr (default INFO).")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _global_options()
    parser = argparse.ArgumentParser(
        prog="mobius_frobenius",
        description="Frobenius traces, L-polynomials, Möbius sums and explicit bounds for curves over finite fields.",
        parents=[parent],
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("curve-count", parents=[parent], help="Point counts #C(F_{q^n}) and traces A_C(n).")
    p.add_argument("--curve", required=True, help='Curve spec, e.g. "elliptic 5^1 a=[1] b=[0]".')
    p.add_argument("--n-max", type=int, default=None, help="Largest extension degree (default 2g).")

    p = sub.add_parser("curve-zeta", parents=[parent], help="Exact L-polynomial (JSON).")
    p.add_argument("--curve", required=True)
    p.add_argument("--spectrum", action="store_true", help="Include certified eigenvalues and angles.")

    p = sub.add_parser("curve-angles", parents=[parent], help="Certified Frobenius eigenvalues and normalised angles.")
    p.add_argument("--curve", required=True)

    p = sub.add_parser("mobius-sum", parents=[parent], help="Σ μ(n)·a_C(n) or Σ μ(n)·e(nα).")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--curve", help="Curve whose normalised traces weight the sum.")
    target.add_argument("--alpha", help='Angle as "a/b", a decimal string or "angle j of curve <spec>".')
    p.add_argument("--N", type=_int_list, required=True, help="Comma-separated list of N.")
    p.add_argument("--method", choices=("direct", "swapped", "both"), default="both")
    p.add_argument("--profile-B", type=_float_list, default=None, help="Emit the Davenport profile for these B.")
    p.add_argument("--c", type=float, default=1.0, help="Davenport constant c(B) for the profile.")

    p = sub.add_parser("bounds", parents=[parent], help="Explicit constants κ, γ, C(2,d) and bound values (JSON).")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--d", type=_int_list, default=[2, 4, 8], help="Degrees d for C(2,d).")
    p.add_argument("--N", type=int, default=10**6, help="N for the right-hand sides.")

    p = sub.add_parser("approx", parents=[parent], help="Dirichlet approximants and irrationality probes.")
    p.add_argument("--alpha", required=True)
    p.add_argument("--N", type=_int_list, default=None, help="Dirichlet parameters.")
    p.add_argument("--s-max", type=int, default=None, help="Run the irrationality probe up to this denominator.")
    p.add_argument("--kappa", type=float, default=None, help="κ for the large-denominator and gap checks.")

    p = sub.add_parser("kloosterman", parents=[parent], help="Kloosterman sums and their recurrence.")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--mobius-N", type=_int_list, default=None, help="Also report Σ μ(n)cos(2πnφ) for these N.")
    p.add_argument("--kappa", type=float, default=None, help="κ for the μ-α bound column.")
    return parser


def config_from_args(args: argparse.Namespace, base: RunConfig) -> RunConfig:
    overrides = {}
    for attr, field in (
        ("precision_bits", "precision_bits"),
        ("budget", "enumeration_budget"),
        ("sieve_limit", "sieve_limit"),
        ("format", "output_format"),
        ("workers", "workers"),
        ("slack", "slack_constant"),
    ):
        if hasattr(args, attr):
            overrides[field] = getattr(args, attr)
    if hasattr(args, "cache_path"):
        overrides["cache_path"] = Path(args.cache_path).expanduser()
    return replace(base, **overrides)


class _Session:
    """Config and lazily opened cache for one command."""

    def __init__(self, config: RunConfig) -> None:
        self.config = config
        self._store: CacheStore | None = None

    @property
    def store(self) -> CacheStore:
        if self._store is None:
            self._store = CacheStore(self.config.cache_path)
        return self._store

    def header(self, command: str, units: str) -> dict[str, object]:
        return {"command": command, "precision_bits": self.config.precision_bits, "units": units}

    def records(self, spec: CurveSpec, n_max: int):
        return trace_sequence(spec, n_max, self.store, self.config.enumeration_budget, self.config.workers)

    def lpoly(self, spec: CurveSpec) -> zeta.LPolynomial:
        records = self.records(spec, 2 * spec.genus)
        return zeta.reconstruct_l_polynomial(records, spec.q, spec.genus)

    def spectrum(self, spec: CurveSpec) -> zeta.FrobeniusSpectrum:
        return zeta.certified_spectrum(self.lpoly(spec), self.config.precision_bits)

    def alpha(self, text: str, exact_decimals: bool) -> Ball | Fraction:
        match = _ANGLE_REF.match(text)
        if match:
            return self.spectrum(parse_curve(match.group(2))).angle_ball(int(match.group(1)))
        if exact_decimals:
            try:
                return Fraction(text.strip())
            except ValueError:
                raise InvalidParams(f"Cannot parse α = {text!r}.") from None
        return parse_real(text, self.config.precision_bits)

    def sieve(self, N: int) -> mobius.MobiusTable:
        return mobius.sieve(N, budget=self.config.sieve_limit)


def _curve_count(s: _Session, args: argparse.Namespace, out: TextIO) -> None:
    spec = parse_curve(args.curve)
    n_max = args.n_max if args.n_max is not None else 2 * spec.genus
    rows = [
        {
            "n": r.n,
            "count": str(r.count),
            "trace": str(r.trace),
            "normalised_trace": repr(normalised_trace(r, spec.genus, spec.q)),
        }
        for r in s.records(spec, n_max)
    ]
    frame = pd.DataFrame(rows, columns=["n", "count", "trace", "normalised_trace"])
    write_table(frame, out, s.config.output_format, s.header("curve-count", "points; trace A_C(n)"))


def _curve_zeta(s: _Session, args: argparse.Namespace, out: TextIO) -> None:
    spec = parse_curve(args.curve)
    lpoly = s.lpoly(spec)
    payload = {"curve": spec.spec_string, **lpoly.to_json(spec.base.p)}
    if args.spectrum:
        payload["spectrum"] = zeta.certified_spectrum(lpoly, s.config.precision_bits).to_json()
    write_json(payload, out)


def _curve_angles(s: _Session, args: argparse.Namespace, out: TextIO) -> None:
    spectrum = s.spectrum(parse_curve(args.curve))
    data = spectrum.to_json()
    rows = [
        {
            "j": j,
            "angle": data["angles"][j],
            "beta_re": data["eigenvalues"][j][0],
            "beta_im": data["eigenvalues"][j][1],
            "multiplicity": spectrum.multiplicities[j],
            "angle_radius": data["angle_radius"],
        }
        for j in range(len(spectrum.angles))
    ]
    frame = pd.DataFrame(rows, columns=["j", "angle", "beta_re", "beta_im", "multiplicity", "angle_radius"])
    write_table(frame, out, s.config.output_format, s.header("curve-angles", "turns (angle in [0,1))"))


def _mobius_sum(s: _Session, args: argparse.Namespace, out: TextIO) -> None:
    Ns = sorted(set(args.N))
    table = s.sieve(max(Ns))
    workers = s.config.workers
    if args.curve is not None:
        spectrum = s.spectrum(parse_curve(args.curve))
        if args.profile_B:
            frame = mobius.davenport_profile(table, spectrum, Ns, args.profile_B, args.c, workers)
            frame["value"] = frame["value"].map(repr)
            frame["normalised"] = frame["normalised"].map(repr)
            frame["error_bound"] = frame["error_bound"].map(lambda e: f"{e:.3e}")
            write_table(frame, out, s.config.output_format, s.header("mobius-sum", "|S(N)|(log N)^B/(cN)"))
            return
        methods = ("direct", "swapped") if args.method == "both" else (args.method,)
        rows = [
            mobius.mobius_frobenius_sum(table, spectrum, N, m, s.config.slack_constant, workers).as_row()
            for N in Ns
            for m in methods
        ]
        units = "Σ μ(n) a_C(n)"
    else:
        alpha = s.alpha(args.alpha, exact_decimals=True)
        rows = []
        for N in Ns:
            result = mobius.mobius_exponential_sum(table, alpha, N, workers)
            row = result.as_row()
            row["imag"] = repr(result.value.imag)
            rows.append(row)
        units = "Σ μ(n) e(nα)"
    columns = ["N", "method", "value", "error_bound", "bound_rhs", "ratio"]
    if args.alpha is not None:
        columns.insert(3, "imag")
    write_table(pd.DataFrame(rows, columns=columns), out, s.config.output_format, s.header("mobius-sum", units))


def _bounds(s: _Session, args: argparse.Namespace, out: TextIO) -> None:
    bits = s.config.precision_bits
    digits = 40
    profile = bounds.bound_profile(args.q, args.g, bits)
    slack = s.config.slack_constant
    payload = {
        **profile.to_json(digits),
        "gamma_from_kappa": mpmath.nstr(bounds.gamma_from_kappa(args.q, args.g, bits), digits),
        "C2": {str(d): mpmath.nstr(bounds.bw_constant(2, d, bits), digits) for d in args.d},
        "N": args.N,
        "rhs": {
            "theorem2": mpmath.nstr(bounds.bound_rhs("theorem2", bits, q=args.q, g=args.g, N=args.N, slack=slack), 20),
            "mu_alpha": mpmath.nstr(bounds.bound_rhs("mu_alpha", bits, kappa=profile.kappa_qg, N=args.N, slack=slack), 20),
            "dirichlet_M": str(bounds.dirichlet_parameter(profile.kappa_qg, args.N)),
        },
        "precision_bits": bits,
    }
    write_json(payload, out)


def _approx(s: _Session, args: argparse.Namespace, out: TextIO) -> None:
    alpha = s.alpha(args.alpha, exact_decimals=False)
    fmt = s.config.output_format
    if args.s_max is not None:
        frame = diophantine.irrationality_probe(alpha, args.s_max, s.config.precision_bits)
        write_table(frame, out, fmt, s.header("approx", "irrationality exponent estimates"))
        if args.kappa is not None:
            check = diophantine.arg_approximation_check(alpha, args.s_max, args.kappa, s.config.precision_bits)
            write_table(check, out, fmt, s.header("approx", "log gap vs log 1/(π(2s)^(1+κ))"))
        return
    if not args.N:
        raise InvalidParams("approx needs --N or --s-max.")
    rows = []
    for N in args.N:
        row = {"N": N, **diophantine.dirichlet_approximant(alpha, N, s.config.precision_bits).as_row()}
        if args.kappa is not None:
            check = diophantine.large_denominator_check(alpha, N, args.kappa)
            row["lower_bound"] = mpmath.nstr(check.lower_bound, 12)
            row["satisfied"] = check.satisfied
        rows.append(row)
    write_table(pd.DataFrame(rows), out, fmt, s.header("approx", "Dirichlet approximants r/s"))


def _kloosterman(s: _Session, args: argparse.Namespace, out: TextIO) -> None:
    config = s.config
    report = charsums.recurrence_check(
        args.q,
        args.a,
        args.n_max,
        config.precision_bits,
        config.enumeration_budget,
        config.workers,
        config.as_degree_cap,
    )
    write_table(report.table, out, config.output_format, s.header("kloosterman", "unnormalised T_n"))
    if args.mobius_N:
        Ns = sorted(set(args.mobius_N))
        table = s.sieve(max(Ns))
        rows = [
            charsums.mobius_char_sum(
                table, report.spectrum, N, args.kappa, config.slack_constant, workers=config.workers
            ).as_row()
            for N in Ns
        ]
        frame = pd.DataFrame(rows, columns=["N", "method", "value", "error_bound", "bound_rhs", "ratio"])
        write_table(frame, out, config.output_format, s.header("kloosterman", "Σ μ(n) cos(2πnφ)"))


_HANDLERS = {
    "curve-count": _curve_count,
    "curve-zeta": _curve_zeta,
    "curve-angles": _curve_angles,
    "mobius-sum": _mobius_sum,
    "bounds": _bounds,
    "approx": _approx,
    "kloosterman": _kloosterman,
}


def run(command: str, args: argparse.Namespace, config: RunConfig, out: TextIO | None = None) -> int:
    """Execute one subcommand; 0 on success, 1 on domain errors, 2 on malformed specs."""
    out = out if out is not None else sys.stdout
    try:
        _HANDLERS[command](_Session(config), args, out)
    except SpecSyntaxError as exc:
        print(f"mobius_frobenius {command}: error: {exc}", file=sys.stderr)
        print(CURVE_GRAMMAR, file=sys.stderr)
        return 2
    except MobiusFrobeniusError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    load_dotenv()
    level = getattr(args, "log_level", "INFO").upper()
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")
    logger.setLevel(level)
    try:
        config = config_from_args(args, RunConfig.from_env())
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    return run(args.command, args, config, out)
