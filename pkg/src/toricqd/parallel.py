"""Order-preserving parallel map over independent per-key computations."""

from concurrent.futures import ThreadPoolExecutor


def pmap(fn, items, workers: int = 1):
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
