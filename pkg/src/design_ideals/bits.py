"""Subset <-> bitmask helpers.

Point sets are Python ints used as bitsets: bit ``i`` set means point ``i``
is present.  Everything that needs vectorised popcounts converts to numpy
``uint64`` arrays (only possible while ``v <= 64``).
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

import numpy as np


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def points_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return mask.bit_count()


def lex_key(mask: int) -> tuple[int, ...]:
    return points_of(mask)


def subsets_of_size(v: int, s: int) -> Iterator[int]:
    """All ``s``-subsets of ``range(v)`` as masks, in lexicographic order."""
    for c in combinations(range(v), s):
        yield mask_of(c)


def submasks_of_size(mask: int, s: int) -> Iterator[int]:
    for c in combinations(points_of(mask), s):
        yield mask_of(c)


def delta_columns(v: int, s: int) -> list[int]:
    """Subsets of size <= s: sizes ascending, lexicographic within a size."""
    cols: list[int] = []
    for size in range(s + 1):
        cols.extend(subsets_of_size(v, size))
    return cols


def combination_masks(v: int, k: int) -> np.ndarray:
    """All k-subsets of range(v) as a lexicographically ordered uint64 array."""
    if v > 64:
        raise ValueError("vectorised subset arrays need v <= 64")
    memo: dict[tuple[int, int], np.ndarray] = {}

    def build(start: int, size: int) -> np.ndarray:
        key = (start, size)
        if key in memo:
            return memo[key]
        if size == 0:
            arr = np.zeros(1, dtype=np.uint64)
        else:
            parts = [
                np.uint64(1 << a) | build(a + 1, size - 1)
                for a in range(start, v - size + 1)
            ]
            arr = np.concatenate(parts) if parts else np.zeros(0, dtype=np.uint64)
        memo[key] = arr
        return arr

    return build(0, k)


def to_uint64(masks: Iterable[int]) -> np.ndarray:
    return np.fromiter(masks, dtype=np.uint64)
