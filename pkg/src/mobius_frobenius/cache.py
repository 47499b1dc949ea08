"""Persistent point-count cache (one JSON object per curve, map n -> count)."""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path
import tempfile
import threading

from .curves import CountRecord, CurveSpec, count_points
from .errors import CacheCorrupt
from .fields import DEFAULT_ENUMERATION_BUDGET

logger = logging.getLogger("mobius_frobenius")
if logger.level == logging.NOTSET:
    logger.setLevel(logging.INFO)


def _parse_entries(text: str) -> dict[str, dict[int, int]]:
    raw = json.loads(text)
    if not isinstance(raw, dict):
        raise CacheCorrupt("Cache root must be a JSON object.")
    entries: dict[str, dict[int, int]] = {}
    for key, counts in raw.items():
        if not isinstance(counts, dict):
            raise CacheCorrupt(f"Entry for {key!r} is not an object.")
        entries[key] = {int(n): int(c) for n, c in counts.items()}
    return entries


class CacheStore:
    def __init__(self, path: Path | str) -> None:
        self.path = Path(path)
        self.recovered = False
        self._lock = threading.Lock()
        self._entries = self._load()

    def _load(self) -> dict[str, dict[int, int]]:
        if not self.path.exists():
            return {}
        try:
            return _parse_entries(self.path.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, ValueError, TypeError, AttributeError) as exc:
            logger.warning("%s: %s is malformed (%s); rebuilding from scratch.", CacheCorrupt.__name__, self.path, exc)
            self.recovered = True
            return {}

    @property
    def entries(self) -> dict[str, dict[int, int]]:
        return {key: dict(counts) for key, counts in self._entries.items()}

    def get(self, key: str, n: int) -> int | None:
        return self._entries.get(key, {}).get(n)

    def put(self, key: str, n: int, count: int) -> None:
        with self._lock:
            self._entries.setdefault(key, {})[n] = count
            self._write()

    def reload(self) -> "CacheStore":
        return CacheStore(self.path)

    def _write(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        payload = {
            key: {str(n): str(c) for n, c in sorted(counts.items())}
            for key, counts in sorted(self._entries.items())
        }
        fd, tmp_name = tempfile.mkstemp(dir=self.path.parent, prefix=".counts-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(json.dumps(payload, indent=2, ensure_ascii=False))
            os.replace(tmp_name, self.path)
        except BaseException:
            if os.path.exists(tmp_name):
                os.unlink(tmp_name)
            raise


def cache_get_or_count(
    store: CacheStore,
    spec: CurveSpec,
    n: int,
    budget: int = DEFAULT_ENUMERATION_BUDGET,
    workers: int = 1,
) -> CountRecord:
    key = spec.spec_string
    count = store.get(key, n)
    if count is not None:
        logger.debug("Cache hit for %s, n=%s.", key, n)
        return CountRecord(n, count, spec.q**n + 1 - count)
    record = count_points(spec, n, budget, workers)
    store.put(key, n, record.count)
    return record
