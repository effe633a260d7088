"""Symmetric exchange, multiple symmetric exchange and the double swap."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .bits import elements, format_set, popcount, subsets_by_size
from .core import Matroid
from .errors import InternalConsistency, InvalidParameter, SwapInvalid


@dataclass(frozen=True)
class SwapMove:
    """Element ``e`` leaves the basis at position ``i``, ``f`` leaves position ``j``."""

    i: int
    j: int
    e: int
    f: int

    def to_json(self) -> dict:
        return {"i": self.i, "j": self.j, "e": self.e, "f": self.f}

    @classmethod
    def from_json(cls, doc: dict) -> "SwapMove":
        return cls(int(doc["i"]), int(doc["j"]), int(doc["e"]), int(doc["f"]))

    def reversed(self) -> "SwapMove":
        """The move that undoes this one (same positions, elements exchanged back)."""
        return SwapMove(self.i, self.j, self.f, self.e)


def swap_sets(b1: int, b2: int, e: int, f: int) -> tuple[int, int]:
    """``(B1 - e + f, B2 - f + e)`` without any basis check."""
    be, bf = 1 << e, 1 << f
    return (b1 & ~be) | bf, (b2 & ~bf) | be


def try_double_swap(m: Matroid, b1: int, b2: int, e: int, f: int) -> Optional[tuple[int, int]]:
    """Non-raising double swap for search loops; None when a result is not a basis."""
    d1, d2 = swap_sets(b1, b2, e, f)
    if m.is_basis(d1) and m.is_basis(d2):
        return d1, d2
    return None


def apply_double_swap(pair: tuple[int, int], e: int, f: int, m: Matroid) -> tuple[int, int]:
    b1, b2 = pair
    if not (b1 >> e) & 1:
        raise InvalidParameter(f"e={e} is not in B1={format_set(b1)}")
    if not (b2 >> f) & 1:
        raise InvalidParameter(f"f={f} is not in B2={format_set(b2)}")
    d1, d2 = swap_sets(b1, b2, e, f)
    if not m.is_basis(d1):
        raise SwapInvalid(d1)
    if not m.is_basis(d2):
        raise SwapInvalid(d2)
    return d1, d2


def symmetric_exchange(m: Matroid, b1: int, b2: int, e: int) -> int:
    """Smallest ``f`` in ``B2 - B1`` making both exchanged sets bases."""
    if not (b1 & ~b2) >> e & 1:
        raise InvalidParameter(f"e={e} is not in B1 - B2 = {format_set(b1 & ~b2)}")
    for f in elements(b2 & ~b1):
        if try_double_swap(m, b1, b2, e, f) is not None:
            return f
    raise InternalConsistency(
        f"no symmetric exchange for {format_set(b1)}, {format_set(b2)}, e={e}: oracle is not a matroid"
    )


def multiple_symmetric_exchange(m: Matroid, b1: int, b2: int, a1: int) -> int:
    """Lexicographically first ``A2`` (by size, then elements) exchangeable against ``A1``."""
    if a1 & ~b1:
        raise InvalidParameter(f"A1={format_set(a1)} is not a subset of B1={format_set(b1)}")
    r = popcount(b1)
    keep1 = b1 & ~a1
    for size in range(popcount(b2) + 1):
        for a2 in subsets_by_size(b2, size):
            d1 = keep1 | a2
            if popcount(d1) != r:
                continue
            d2 = (b2 & ~a2) | a1
            if popcount(d2) == r and m.is_basis(d1) and m.is_basis(d2):
                return a2
    raise InternalConsistency(
        f"no multiple symmetric exchange for A1={format_set(a1)}: oracle is not a matroid"
    )
