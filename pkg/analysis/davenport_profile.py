#!/usr/bin/env python3
"""Davenport profiles |S(N)|(log N)^B/(cN) for a batch of curves, plus a manifest."""

from __future__ import annotations

import argparse
import json
from pathlib import Path
import re

from dotenv import load_dotenv

from mobius_frobenius import RunConfig, certified_spectrum, parse_curve, reconstruct_l_polynomial, sieve, trace_sequence
from mobius_frobenius.cache import CacheStore
from mobius_frobenius.mobius import davenport_profile


def _parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Write Davenport profiles for the configured curves.")
    parser.add_argument("--config", default="config/mobius_config.json", help="JSON with curves, N, B and c.")
    parser.add_argument("--out-dir", required=True, help="Output directory for the CSV files.")
    parser.add_argument("--max-N", type=int, default=None, help="Drop N above this value.")
    return parser.parse_args()


def _slug(text: str) -> str:
    return re.sub(r"[^0-9A-Za-z]+", "_", text).strip("_").lower()


def main() -> None:
    load_dotenv()
    args = _parse_args()
    config = RunConfig.from_env()
    settings = json.loads(Path(args.config).read_text(encoding="utf-8"))
    Ns = sorted(int(n) for n in settings["N"] if args.max_N is None or int(n) <= args.max_N)
    if not Ns:
        raise ValueError("No N left after --max-N.")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    print(f"[davenport_profile] Sieving μ up to {Ns[-1]}")
    table = sieve(Ns[-1], budget=max(config.sieve_limit, Ns[-1]))
    store = CacheStore(config.cache_path)

    written = {}
    for text in settings["curves"]:
        spec = parse_curve(text)
        records = trace_sequence(spec, 2 * spec.genus, store, config.enumeration_budget, config.workers)
        lpoly = reconstruct_l_polynomial(records, spec.q, spec.genus)
        spectrum = certified_spectrum(lpoly, config.precision_bits)
        frame = davenport_profile(table, spectrum, Ns, settings["B"], settings.get("c", 1.0), config.workers)
        out_path = out_dir / f"profile_{_slug(spec.spec_string)}.csv"
        frame.to_csv(out_path, index=False)
        written[spec.spec_string] = {"file": out_path.name, "P": [str(c) for c in lpoly.coeffs]}
        print(f"[davenport_profile] Wrote {out_path} ({len(frame)} rows)")

    manifest = {
        "curves": written,
        "parameters": {
            "N": Ns,
            "B": settings["B"],
            "c": settings.get("c", 1.0),
            "precision_bits": config.precision_bits,
        },
    }
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, ensure_ascii=False))
    print(f"[davenport_profile] Wrote {manifest_path}")


if __name__ == "__main__":
    main()
