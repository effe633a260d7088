"""Replayable double-swap certificates.

A certificate lists a starting sequence of bases and moves that act on
fixed positions of that sequence.  Unordered certificates only require the
final sequence to equal ``end`` as a multiset; ordered ones (used for
relations that forbid reordering) require positional equality.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .bits import elements, to_mask
from .core import Matroid
from .exchange import SwapMove

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Certificate:
    start: tuple[int, ...]
    end: tuple[int, ...]
    moves: tuple[SwapMove, ...]
    matroid_sha: str
    ordered: bool = False

    def __len__(self):
        return len(self.moves)

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "start": [list(elements(b)) for b in self.start],
            "end": [list(elements(b)) for b in self.end],
            "moves": [mv.to_json() for mv in self.moves],
            "matroid_sha": self.matroid_sha,
            "ordered": self.ordered,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        return cls(
            start=tuple(to_mask(b) for b in doc["start"]),
            end=tuple(to_mask(b) for b in doc["end"]),
            moves=tuple(SwapMove.from_json(mv) for mv in doc["moves"]),
            matroid_sha=str(doc.get("matroid_sha", "")),
            ordered=bool(doc.get("ordered", False)),
        )


@dataclass(frozen=True)
class ReplayResult:
    ok: bool
    failed_at: Optional[int] = None
    reason: str = ""
    final: tuple = field(default=(), compare=False)

    def __bool__(self):
        return self.ok


def verify_certificate(m: Matroid, cert: Certificate) -> ReplayResult:
    """Replay ``cert`` on ``m``.

    Deliberately works on plain Python sets and calls only the raw
    independence oracle, so it shares no code with certificate generation.
    ``failed_at`` is the index of the first bad move, or ``len(moves)`` when
    the final sequence does not match ``end``.
    """
    if cert.matroid_sha and cert.matroid_sha != m.fingerprint:
        return ReplayResult(False, None, "certificate is bound to a different matroid")
    if len(cert.start) != len(cert.end):
        return ReplayResult(False, None, "start and end have different lengths")

    def basis(s: frozenset) -> bool:
        return len(s) == m.rank and all(0 <= x < m.size for x in s) and m.is_independent(to_mask(s))

    seq = [frozenset(elements(b)) for b in cert.start]
    for idx, s in enumerate(seq):
        if not basis(s):
            return ReplayResult(False, None, f"start[{idx}] is not a basis")
    for k, mv in enumerate(cert.moves):
        if not (0 <= mv.i < len(seq) and 0 <= mv.j < len(seq)) or mv.i == mv.j:
            return ReplayResult(False, k, f"bad positions ({mv.i},{mv.j})")
        x, y = seq[mv.i], seq[mv.j]
        if mv.e not in x or mv.f not in y:
            return ReplayResult(False, k, f"e={mv.e} not in position {mv.i} or f={mv.f} not in position {mv.j}")
        nx = (x - {mv.e}) | {mv.f}
        ny = (y - {mv.f}) | {mv.e}
        if not basis(nx) or not basis(ny):
            return ReplayResult(False, k, "swap result is not a basis")
        seq[mv.i], seq[mv.j] = nx, ny
    target = [frozenset(elements(b)) for b in cert.end]
    same = seq == target if cert.ordered else Counter(seq) == Counter(target)
    final = tuple(to_mask(s) for s in seq)
    if not same:
        return ReplayResult(False, len(cert.moves), "final sequence differs from end", final)
    return ReplayResult(True, None, "", final)


def replay(seq, moves) -> list[int]:
    """Apply moves to a sequence of bitmasks without any checks."""
    out = list(seq)
    for mv in moves:
        be, bf = 1 << mv.e, 1 << mv.f
        out[mv.i], out[mv.j] = (out[mv.i] & ~be) | bf, (out[mv.j] & ~bf) | be
    return out
