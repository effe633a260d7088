"""Bit-vector helpers. A set of ground elements is a Python ``int``."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator


def to_mask(elements: Iterable[int]) -> int:
    m = 0
    for e in elements:
        if e < 0:
            raise ValueError(f"negative element {e}")
        m |= 1 << e
    return m


@lru_cache(maxsize=1 << 16)
def elements(mask: int) -> tuple[int, ...]:
    """Sorted tuple of the elements in ``mask``."""
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


def lowest(mask: int) -> int:
    """Index of the smallest element; ``mask`` must be non-zero."""
    return (mask & -mask).bit_length() - 1


def lex_key(mask: int) -> tuple[int, ...]:
    # Lexicographic order on sorted element tuples; for equal cardinality this
    # is the order produced by itertools.combinations.
    return elements(mask)


def submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask``, including 0 and ``mask`` itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def subsets_by_size(mask: int, size: int) -> Iterator[int]:
    """Subsets of ``mask`` of a given size, in lexicographic order."""
    for combo in combinations(elements(mask), size):
        yield to_mask(combo)


def format_set(mask: int) -> str:
    return "{" + ",".join(map(str, elements(mask))) + "}"
