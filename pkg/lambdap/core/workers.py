from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from loguru import logger

from lambdap.core.config import get_settings

Item = TypeVar("Item")
Result = TypeVar("Result")


def parallel_map(
    fn: Callable[[Item], Result],
    items: Iterable[Item],
    workers: Optional[int] = None,
) -> List[Result]:
    """
    Map `fn` over `items`, results in input order.

    `fn` must be a picklable top-level function when workers > 1.
    """

    items = list(items)
    workers = workers if workers is not None else get_settings().workers

    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]

    logger.debug(f"Fanning out {len(items)} tasks over {workers} workers")

    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))
