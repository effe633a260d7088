"""Strongly base orderable matroids and the overlap-driven rewriting algorithm.

``rewrite_certificate`` turns two compatible basis sequences of a strongly
base orderable matroid into an explicit chain of double swaps.  Each round
pairs the sequences optimally, picks two positions that disagree on some
element, splits the two exchange bijections into the sides of a bipartite
graph and moves both pairs towards each other; the optimal overlap strictly
grows every round, which bounds the recursion depth.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .bits import elements, format_set, popcount, submasks, to_mask
from .certificate import Certificate
from .config import DEFAULT_LIMITS, Limits
from .core import Matroid
from .errors import InternalConsistency, InvalidParameter, NotStronglyBaseOrderable
from .exchange import SwapMove, try_double_swap

BRUTE_FORCE_MAX = 8
CONSTRUCTION_CHECK_MAX = 20


@dataclass(frozen=True)
class ExchangeBijection:
    source: int
    target: int
    mapping: tuple[tuple[int, int], ...]  # sorted (x, pi(x)) pairs over all of source

    def __post_init__(self):
        dom = to_mask(x for x, _ in self.mapping)
        img = to_mask(y for _, y in self.mapping)
        if dom != self.source or img != self.target or len(self.mapping) != popcount(self.source):
            raise InvalidParameter("mapping is not a bijection source -> target")
        for x, y in self.mapping:
            if (self.source & self.target) >> x & 1 and x != y:
                raise InvalidParameter(f"mapping must fix common element {x}")

    def __getitem__(self, x: int) -> int:
        return dict(self.mapping)[x]

    def as_dict(self) -> dict[int, int]:
        return dict(self.mapping)

    def image(self, a: int) -> int:
        d = self.as_dict()
        return to_mask(d[x] for x in elements(a))

    def check(self, m: Matroid) -> Optional[int]:
        """First subset A of the source for which ``source - A + pi(A)`` is not a basis."""
        moving = self.source & ~self.target
        for a in submasks(moving):
            if not m.is_basis((self.source & ~a) | self.image(a)):
                return a
        return None


def find_sbo_bijection(m: Matroid, b1: int, b2: int) -> Optional[ExchangeBijection]:
    """Lexicographically first exchange bijection ``B1 -> B2`` fixing ``B1 & B2``, or None.

    Backtracks over partial maps of ``B1 - B2`` (increasing domain element,
    increasing target) and rejects a partial map as soon as some subset of
    its domain that contains the newest element fails the basis condition.
    """
    if not (m.is_basis(b1) and m.is_basis(b2)):
        raise InvalidParameter("both arguments must be bases")
    common = b1 & b2
    dom = elements(b1 & ~b2)
    cod = elements(b2 & ~b1)
    chosen: list[int] = []
    # images[k] is the bit of chosen[k]; masks over dom indices are small ints
    k_total = len(dom)

    def ok_with_new(k: int) -> bool:
        # every subset of dom[0..k] containing dom[k]
        new_bit = 1 << k
        for sub in submasks((1 << k) - 1):
            a = sub | new_bit
            removed = 0
            added = 0
            idx = 0
            while a:
                if a & 1:
                    removed |= 1 << dom[idx]
                    added |= 1 << chosen[idx]
                a >>= 1
                idx += 1
            if not m.is_basis((b1 & ~removed) | added):
                return False
        return True

    used = [False] * len(cod)

    def extend(k: int) -> bool:
        if k == k_total:
            return True
        for t, y in enumerate(cod):
            if used[t]:
                continue
            chosen.append(y)
            used[t] = True
            if ok_with_new(k) and extend(k + 1):
                return True
            chosen.pop()
            used[t] = False
        return False

    if not extend(0):
        return None
    mapping = sorted([(x, x) for x in elements(common)] + list(zip(dom, chosen)))
    bij = ExchangeBijection(b1, b2, tuple(mapping))
    if k_total <= CONSTRUCTION_CHECK_MAX and bij.check(m) is not None:
        raise InternalConsistency("bijection search accepted an invalid map")
    return bij


def is_strongly_base_orderable(
    m: Matroid, limits: Limits = DEFAULT_LIMITS
) -> tuple[bool, Optional[tuple[int, int]]]:
    """Exhaustive check over unordered basis pairs; returns the first failing pair."""
    bases = m.bases(limits)
    clock = limits.clock()
    for x in range(len(bases)):
        for y in range(x + 1, len(bases)):
            clock.tick()
            if find_sbo_bijection(m, bases[x], bases[y]) is None:
                return False, (bases[x], bases[y])
    return True, None


# -- overlap ------------------------------------------------------------------------

@dataclass(frozen=True)
class OverlapValue:
    value: int
    witness: tuple[int, ...]  # witness[i] = index in m2 paired with m1[i]


def _weights(m1, m2):
    return [[popcount(a & b) for b in m2] for a in m1]


def overlap_bruteforce(m1: Sequence[int], m2: Sequence[int]) -> OverlapValue:
    """Best pairing by trying every permutation; first optimum in lexicographic order."""
    w = _weights(m1, m2)
    n = len(m1)
    best, arg = -1, tuple(range(n))
    for perm in permutations(range(n)):
        v = sum(w[i][perm[i]] for i in range(n))
        if v > best:
            best, arg = v, perm
    return OverlapValue(max(best, 0), tuple(arg))


def _assignment_value(w: np.ndarray) -> int:
    if w.size == 0:
        return 0
    rows, cols = linear_sum_assignment(w, maximize=True)
    return int(w[rows, cols].sum())


def overlap_assignment(m1: Sequence[int], m2: Sequence[int]) -> OverlapValue:
    """Best pairing via min-cost assignment; lexicographically first optimum.

    The optimum value comes from one assignment solve; the witness is fixed
    row by row, taking the smallest column that still admits an optimal
    completion.
    """
    w = np.array(_weights(m1, m2), dtype=np.int64).reshape(len(m1), len(m2))
    n = len(m1)
    total = _assignment_value(w)
    rows = list(range(n))
    cols = list(range(n))
    acc = 0
    witness = []
    for i in range(n):
        rest_rows = rows[1:]
        for j in cols:
            rest_cols = [c for c in cols if c != j]
            sub = w[np.ix_(rest_rows, rest_cols)]
            if acc + w[i, j] + _assignment_value(sub) == total:
                witness.append(j)
                acc += int(w[i, j])
                cols = rest_cols
                break
        rows = rest_rows
    return OverlapValue(total, tuple(witness))


def overlap(m1: Sequence[int], m2: Sequence[int]) -> OverlapValue:
    """Largest total intersection over pairings of the two basis multisets.

    Equals ``rank * n`` exactly when the multisets coincide.
    """
    if len(m1) != len(m2):
        raise InvalidParameter(f"monomials have different degrees {len(m1)} and {len(m2)}")
    if len(m1) <= BRUTE_FORCE_MAX:
        return overlap_bruteforce(m1, m2)
    return overlap_assignment(m1, m2)


# -- rewriting ------------------------------------------------------------------------

def _two_colour(vertices: int, adj: dict[int, list[int]]) -> int:
    """Side S of a proper 2-colouring; each component's smallest vertex is in S."""
    side: dict[int, int] = {}
    for v in elements(vertices):
        if v in side:
            continue
        side[v] = 0
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj.get(u, ()):
                if w not in side:
                    side[w] = 1 - side[u]
                    stack.append(w)
                elif side[w] == side[u]:
                    raise InternalConsistency("union of two matchings is not bipartite")
    return to_mask(v for v, s in side.items() if s == 0)


def _split_pair(m, x1, x2, y1, y2):
    """One rewriting round on the B-pair (x1, x2) and D-pair (y1, y2)."""
    pi_x = find_sbo_bijection(m, x1, x2)
    if pi_x is None:
        raise NotStronglyBaseOrderable((x1, x2))
    pi_y = find_sbo_bijection(m, y1, y2)
    if pi_y is None:
        raise NotStronglyBaseOrderable((y1, y2))
    adj: dict[int, list[int]] = {}
    for pi, src, dst in ((pi_x, x1, x2), (pi_y, y1, y2)):
        d = pi.as_dict()
        for a in elements(src & ~dst):
            adj.setdefault(a, []).append(d[a])
            adj.setdefault(d[a], []).append(a)
    s = _two_colour(x1 | x2 | y1 | y2, adj)
    t = (x1 | x2 | y1 | y2) & ~s
    nx1 = (s & (x1 | x2)) | (x1 & x2)
    nx2 = (t & (x1 | x2)) | (x1 & x2)
    ny1 = (s & (y1 | y2)) | (y1 & y2)
    ny2 = (t & (y1 | y2)) | (y1 & y2)
    return pi_x, pi_y, (nx1, nx2), (ny1, ny2)


def _moves_towards(m, pos_i, pos_j, b1, b2, nb1, pi: ExchangeBijection) -> list[SwapMove]:
    d = pi.as_dict()
    out = []
    cur1, cur2 = b1, b2
    for a in elements(b1 & ~nb1):
        res = try_double_swap(m, cur1, cur2, a, d[a])
        if res is None:
            raise InternalConsistency(
                f"exchange bijection broke at element {a} of {format_set(b1)}"
            )
        cur1, cur2 = res
        out.append(SwapMove(pos_i, pos_j, a, d[a]))
    if cur1 != nb1:
        raise InternalConsistency("single swaps did not realize the multiple exchange")
    return out


def _pick(bseq, dseq, sigma):
    for e in range(max((x.bit_length() for x in bseq), default=0)):
        bit = 1 << e
        for i, b in enumerate(bseq):
            if b & bit and not dseq[sigma[i]] & bit:
                for j, bj in enumerate(bseq):
                    if j != i and dseq[sigma[j]] & bit and not bj & bit:
                        return e, i, j
    raise InternalConsistency("sequences are compatible but no disagreeing element was found")


def _rewrite(m, bseq, dseq, trace, depth_left):
    if Counter(bseq) == Counter(dseq):
        perm = []
        used = [False] * len(dseq)
        for b in bseq:
            k = next(k for k, d in enumerate(dseq) if not used[k] and d == b)
            used[k] = True
            perm.append(k)
        return [], perm
    if depth_left <= 0:
        raise InternalConsistency("rewriting exceeded its overlap-based depth bound")
    ov = overlap(bseq, dseq)
    sigma = ov.witness
    if trace is not None:
        trace.append(ov.value)
    _, i, j = _pick(bseq, dseq, sigma)
    si, sj = sigma[i], sigma[j]
    pi_b, pi_d, (nb1, nb2), (nd1, nd2) = _split_pair(m, bseq[i], bseq[j], dseq[si], dseq[sj])
    b_moves = _moves_towards(m, i, j, bseq[i], bseq[j], nb1, pi_b)
    d_moves = _moves_towards(m, si, sj, dseq[si], dseq[sj], nd1, pi_d)
    nb = list(bseq)
    nb[i], nb[j] = nb1, nb2
    nd = list(dseq)
    nd[si], nd[sj] = nd1, nd2
    new_value = overlap(nb, nd).value
    if new_value <= ov.value:
        raise InternalConsistency(f"overlap did not increase ({ov.value} -> {new_value})")
    rest, perm = _rewrite(m, nb, nd, trace, depth_left - 1)
    # Undo the D-side moves, which act on D positions, at the positions where
    # those D entries sit after the recursive rewrite.
    pos_of = [0] * len(perm)
    for k, p in enumerate(perm):
        pos_of[p] = k
    tail = [SwapMove(pos_of[mv.i], pos_of[mv.j], mv.f, mv.e) for mv in reversed(d_moves)]
    return b_moves + rest + tail, perm


def rewrite_certificate(
    m: Matroid,
    b_seq: Sequence,
    d_seq: Sequence,
    trace: Optional[list[int]] = None,
) -> Certificate:
    """Double-swap certificate between two compatible basis sequences.

    ``m`` must be strongly base orderable; otherwise a
    ``NotStronglyBaseOrderable`` error names the pair that has no bijection.
    When ``trace`` is a list, the optimal overlap at every round is appended.
    """
    bs = tuple(b if isinstance(b, int) else to_mask(b) for b in b_seq)
    ds = tuple(d if isinstance(d, int) else to_mask(d) for d in d_seq)
    if len(bs) != len(ds):
        raise InvalidParameter("sequences must have the same length")
    for x in bs + ds:
        if not m.is_basis(x):
            raise InvalidParameter(f"{format_set(x)} is not a basis")
    cb: Counter = Counter()
    cd: Counter = Counter()
    for x in bs:
        cb.update(elements(x))
    for x in ds:
        cd.update(elements(x))
    if cb != cd:
        raise InvalidParameter("sequences are not compatible (element multisets differ)")
    bound = m.rank * len(bs) - overlap(bs, ds).value
    moves, _ = _rewrite(m, list(bs), list(ds), trace, bound)
    return Certificate(bs, ds, tuple(moves), m.fingerprint)
