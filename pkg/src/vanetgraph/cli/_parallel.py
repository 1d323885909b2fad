"""
Ordered fan-out of independent jobs over worker processes.
"""

__all__ = ["ordered_map", "resolve_worker_count"]

import logging
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Optional, Sequence, TypeVar

import jax

from ..errors import ConfigError


logger = logging.getLogger(__name__)

Task = TypeVar("Task")
Result = TypeVar("Result")

THREADS_VARIABLE = "VGS_THREADS"


def resolve_worker_count(requested: Optional[int] = None) -> int:
    """The number of workers to use: `requested`, or the CPU count, capped
    by the `VGS_THREADS` environment variable."""
    cap = os.environ.get(THREADS_VARIABLE)
    if cap is not None and cap.strip():
        try:
            cap_value = int(cap)
        except ValueError as err:
            raise ConfigError(f"{cap!r} is not an integer", THREADS_VARIABLE) from err
        if cap_value < 1:
            raise ConfigError("must be at least 1", THREADS_VARIABLE)
    else:
        cap_value = None
    count = requested if requested is not None else (os.cpu_count() or 1)
    if cap_value is not None:
        count = min(count, cap_value)
    return max(1, count)


def _initialize_worker():
    jax.config.update("jax_enable_x64", True)


def ordered_map(
    function: Callable[[Task], Result], tasks: Sequence[Task], workers: int = 1
) -> list[Result]:
    """`[function(task) for task in tasks]`, spread over `workers`
    processes. Results keep the order of `tasks`."""
    tasks = list(tasks)
    if workers <= 1 or len(tasks) <= 1:
        return [function(task) for task in tasks]
    workers = min(workers, len(tasks))
    logger.debug("Running %d jobs on %d workers.", len(tasks), workers)
    with ProcessPoolExecutor(
        max_workers=workers,
        mp_context=multiprocessing.get_context("spawn"),
        initializer=_initialize_worker,
    ) as executor:
        chunksize = max(1, len(tasks) // (4 * workers))
        return list(executor.map(function, tasks, chunksize=chunksize))
