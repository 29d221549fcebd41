"""Order-preserving map over worker processes."""

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Iterator, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> Iterator[R]:
    """Yield fn(item) in input order, computed in ``jobs`` processes when jobs > 1."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        yield from map(fn, items)
        return
    logger.debug("Mapping %d items over %d workers", len(items), jobs)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(fn, items)
