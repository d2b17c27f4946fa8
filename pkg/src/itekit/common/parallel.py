from __future__ import annotations

import typing
from concurrent.futures import ThreadPoolExecutor

T = typing.TypeVar("T")
R = typing.TypeVar("R")


def parallel_map(fn: typing.Callable[[T], R], items: typing.Iterable[T], threads: int = 1) -> list[R]:
    """Map ``fn`` over ``items``; results keep the input order whatever ``threads`` is."""

    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="itekit") as pool:
        return list(pool.map(fn, items))
