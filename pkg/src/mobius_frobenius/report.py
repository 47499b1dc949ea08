"""CSV/JSON report emission on a text stream."""

from __future__ import annotations

import json
from typing import Any, TextIO

import pandas as pd


def header_line(header: dict[str, Any]) -> str:
    return "# " + "; ".join(f"{key}={value}" for key, value in header.items())


def write_table(frame: pd.DataFrame, stream: TextIO, fmt: str, header: dict[str, Any]) -> None:
    if fmt == "json":
        rows = json.loads(frame.to_json(orient="records", double_precision=15))
        write_json({"header": header, "rows": rows}, stream)
        return
    stream.write(header_line(header) + "\n")
    frame.to_csv(stream, index=False, lineterminator="\n")


def write_json(payload: dict[str, Any], stream: TextIO) -> None:
    stream.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
