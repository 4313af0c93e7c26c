"""Thread-pool helper for independent samples.

Oracle access in the incidence-lists model is typically I/O bound (a
database or a remote graph), so threads are the right tool; with the
in-memory oracle the compiled kernel releases the GIL during searches.
"""
from __future__ import annotations

import threading
from concurrent.futures import ThreadPoolExecutor


def chunk_bounds(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total)) if total else 1
    step, extra = divmod(total, parts)
    out, lo = [], 0
    for j in range(parts):
        hi = lo + step + (1 if j < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def run_chunks(oracle, total: int, body, workers: int = 1):
    """Run ``body(worker_oracle, lo, hi, stop)`` over contiguous chunks.

    ``stop`` is a shared :class:`threading.Event` a chunk may set to ask the
    others to finish early. Results come back in chunk order; each worker's
    queries are merged into ``oracle``. With ``workers=1`` everything runs
    inline on ``oracle`` itself.
    """
    stop = threading.Event()
    if workers <= 1 or total <= 1:
        return [body(oracle, 0, total, stop)]
    bounds = chunk_bounds(total, workers)
    views = [oracle.worker() for _ in bounds]
    with ThreadPoolExecutor(max_workers=len(bounds)) as pool:
        futs = [pool.submit(body, v, lo, hi, stop) for v, (lo, hi) in zip(views, bounds)]
        results = [f.result() for f in futs]
    for v in views:
        oracle.absorb(v)
    return results
