"""Small shared helpers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

__all__ = ["parallel_map"]


def parallel_map(fn, items, n_jobs: int = 1) -> list:
    """Map preserving input order; a bounded thread pool when n_jobs > 1.

    Results are collected by index, so output is identical to the
    sequential map regardless of completion order.
    """
    items = list(items)
    if n_jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, items))
