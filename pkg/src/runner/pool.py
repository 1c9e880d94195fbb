"""
Thread pool helpers.

Heavy lifting happens inside numpy, which releases the GIL, so threads are
enough. Results always come back in submission order.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, Sequence, TypeVar

from ..app.config import get_settings
from ..errors import ConfigError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def resolve_threads(threads: Optional[int] = None) -> int:
    """--threads, then RGTEST_THREADS, then every core."""
    if threads is not None:
        if threads < 0:
            raise ConfigError("--threads must be >= 0.")
        if threads > 0:
            return threads
    return get_settings().resolved_threads()


def map_ordered(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> list[R]:
    work: Sequence[T] = list(items)
    workers = min(resolve_threads(threads), max(1, len(work)))
    if workers <= 1:
        return [fn(item) for item in work]
    logger.debug("Fanning %d work items over %d threads", len(work), workers)
    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="rgtest") as pool:
        return list(pool.map(fn, work))
