"""
Order-preserving fan-out for independent per-pair decisions.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar('T')
R = TypeVar('R')


def map_pairs(fn: Callable[[T], R], items: Iterable[T], threads: int = 1) -> list[R]:
    """Apply `fn` to every item; results come back in input order."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))
