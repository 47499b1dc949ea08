"""Configuration loader for toolkit runs."""

from __future__ import annotations

from dataclasses import dataclass
import os
from pathlib import Path

DEFAULT_PRECISION_BITS = 128
DEFAULT_ENUMERATION_BUDGET = 10**8
DEFAULT_SIEVE_LIMIT = 10**6
DEFAULT_CACHE_PATH = "output/counts.json"
OUTPUT_FORMATS = ("csv", "json")


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return int(raw.replace("_", ""))
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}.") from None


def _float_env(name: str, default: float) -> float:
    raw = os.environ.get(name, "").strip()
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"{name} must be a number, got {raw!r}.") from None


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = DEFAULT_PRECISION_BITS
    enumeration_budget: int = DEFAULT_ENUMERATION_BUDGET
    sieve_limit: int = DEFAULT_SIEVE_LIMIT
    slack_constant: float = 1.0
    cache_path: Path = Path(DEFAULT_CACHE_PATH)
    output_format: str = "csv"
    workers: int = 1
    as_degree_cap: int = 64

    def __post_init__(self) -> None:
        if self.precision_bits < 64:
            raise ValueError("precision_bits must be at least 64.")
        if self.enumeration_budget <= 0 or self.sieve_limit <= 0:
            raise ValueError("Budgets must be positive.")
        if self.workers <= 0:
            raise ValueError("workers must be positive.")
        if self.slack_constant < 0:
            raise ValueError("slack_constant must be non-negative.")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(
                f"output_format must be one of {', '.join(OUTPUT_FORMATS)}; got {self.output_format!r}."
            )

    @classmethod
    def from_env(cls) -> "RunConfig":
        cache_path = Path(
            os.environ.get("MF_CACHE_PATH", DEFAULT_CACHE_PATH)
        ).expanduser()
        output_format = os.environ.get("MF_OUTPUT_FORMAT", "csv").strip().lower()

        return cls(
            precision_bits=_int_env("MF_PRECISION_BITS", DEFAULT_PRECISION_BITS),
            enumeration_budget=_int_env("MF_ENUMERATION_BUDGET", DEFAULT_ENUMERATION_BUDGET),
            sieve_limit=_int_env("MF_SIEVE_LIMIT", DEFAULT_SIEVE_LIMIT),
            slack_constant=_float_env("MF_SLACK_CONSTANT", 1.0),
            cache_path=cache_path,
            output_format=output_format,
            workers=_int_env("MF_WORKERS", 1),
            as_degree_cap=_int_env("MF_AS_DEGREE_CAP", 64),
        )
