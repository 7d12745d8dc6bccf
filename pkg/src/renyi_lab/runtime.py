"""Seeding and parallel-map helpers shared by the randomized searches."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

import numpy as np

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "RENYI_LAB_THREADS"


def default_workers() -> int:
    """Worker count from ``RENYI_LAB_THREADS`` (default 1)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for sample ``index`` of a search seeded with ``seed``.

    Derived seeds make every sample reproducible on its own, independent of
    evaluation order or worker count.
    """
    return np.random.default_rng([int(seed), int(index)])


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None,
         chunk: int = 256) -> Iterator[R]:
    """Ordered map; evaluates chunks on a thread pool when ``workers > 1``.

    Results come back in input order, so a consumer that stops at the first
    hit sees the lowest-index hit no matter how many workers ran.
    """
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        yield from map(fn, items)
        return
    items = list(items)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, len(items), chunk):
            yield from pool.map(fn, items[start : start + chunk])
