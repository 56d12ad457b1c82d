from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar("T")
Out = TypeVar("Out")


def map_replications(
    fn: Callable[[T], Out],
    tasks: Sequence[T],
    workers: int = 1,
    *,
    desc: str | None = None,
) -> list[Out]:
    """
    Apply `fn` to every task, in task order.

    workers > 1 fans out to a process pool; results come back in submission order, so the
    output never depends on the worker count. `fn` and the tasks must be picklable.
    """

    if workers < 1:
        raise ValueError(f"workers must be >= 1 (got {workers})")
    progress = tqdm(total=len(tasks), desc=desc, disable=None, leave=False)
    try:
        if workers == 1 or len(tasks) <= 1:
            results = []
            for task in tasks:
                results.append(fn(task))
                progress.update()
            return results
        chunksize = max(1, len(tasks) // (workers * 8))
        logger.debug("Starting worker pool", extra={"workers": workers, "tasks": len(tasks)})
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = []
            for result in pool.map(fn, tasks, chunksize=chunksize):
                results.append(result)
                progress.update()
            return results
    finally:
        progress.close()
