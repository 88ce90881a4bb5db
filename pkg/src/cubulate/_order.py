"""Deterministic total order on heterogeneous vertex ids."""
import re
from functools import lru_cache

_DIGITS = re.compile(r"(\d+)")


@lru_cache(maxsize=None)
def sort_key(x):
    """Key ordering ints, strings (naturally), tuples and frozensets together.

    Every id type used in the package compares through this key, so sorted
    output never depends on hash order.
    """
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        parts = _DIGITS.split(x)
        return (1, tuple((0, int(p)) if i % 2 else (1, p) for i, p in enumerate(parts)), x)
    if isinstance(x, tuple):
        return (2, tuple(sort_key(y) for y in x))
    if isinstance(x, frozenset):
        return (3, tuple(sorted(sort_key(y) for y in x)))
    return (4, repr(x))


def sorted_ids(items):
    return sorted(items, key=sort_key)


def format_id(x):
    """Render an id as the string used in files and reports."""
    if isinstance(x, str):
        return x
    if isinstance(x, tuple):
        return "(" + ",".join(format_id(y) for y in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(format_id(y) for y in sorted_ids(x)) + "}"
    return str(x)
