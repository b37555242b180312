"""Thread cap from ``FOCK_THREADS`` and an order-preserving parallel map.

Imported before numpy by the package so the cap also reaches the BLAS
thread pools (when numpy has not been imported already).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

_BLAS_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def max_threads() -> int:
    """Worker count: ``FOCK_THREADS`` if set (at least 1), else the CPU count."""
    raw = os.environ.get("FOCK_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def cap_blas_threads():
    raw = os.environ.get("FOCK_THREADS")
    if raw and raw.isdigit() and int(raw) > 0:
        for var in _BLAS_VARS:
            os.environ.setdefault(var, raw)


def pmap(func, items, workers: int | None = None):
    """``list(map(func, items))`` on a thread pool; results keep input order."""
    items = list(items)
    workers = min(workers or max_threads(), len(items)) if items else 1
    if workers <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


cap_blas_threads()
