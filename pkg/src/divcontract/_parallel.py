import os
from concurrent.futures import ProcessPoolExecutor

JOBS_ENV = "DIVCONTRACT_JOBS"


def jobs():
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    # results come back in input order, so merging stays deterministic
    items = list(items)
    n = jobs()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
