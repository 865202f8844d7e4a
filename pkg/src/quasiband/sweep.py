"""Order-preserving parallel map over independent sweep points."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor


def parallel_map(fn, tasks, workers: int = 1):
    tasks = list(tasks)
    if workers is None or workers <= 0:
        workers = os.cpu_count() or 1
    if workers == 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        # map yields results in submission order regardless of completion order
        return list(pool.map(fn, tasks, chunksize=1))
