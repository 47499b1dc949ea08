"""Chunked work partitioning with a fixed combination order."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

T = TypeVar("T")

DEFAULT_CHUNK = 1 << 18


def chunk_ranges(start: int, stop: int, size: int = DEFAULT_CHUNK) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, stop)) for lo in range(start, stop, size)]


def map_chunks(
    func: Callable[[int, int], T],
    start: int,
    stop: int,
    workers: int = 1,
    size: int = DEFAULT_CHUNK,
) -> list[T]:
    """Apply ``func(lo, hi)`` to consecutive ranges; results come back in range order."""
    ranges = chunk_ranges(start, stop, size)
    if workers <= 1 or len(ranges) <= 1:
        return [func(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: func(*r), ranges))
