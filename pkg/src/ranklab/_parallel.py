"""Worker-pool helper; results always come back in submission order."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def worker_count(requested: int | None = None) -> int:
    """Thread budget: ``requested`` if given, else ``RANKLAB_THREADS``, else the CPU count."""
    if requested is None:
        env = os.environ.get("RANKLAB_THREADS", "").strip()
        requested = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(requested))


def ordered_map(fn, items, threads: int | None = None) -> list:
    items = list(items)
    n = min(worker_count(threads), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
