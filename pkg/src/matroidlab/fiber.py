"""Monomials, fibers and double-swap connectivity.

A monomial ``y_B1 ... y_Bn`` is the tuple of its bases sorted
lexicographically.  Two monomials of the same multidegree differ by an
element of the ideal generated by double-swap binomials exactly when one is
reachable from the other by double swaps, so membership questions become
graph searches on fibers.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Optional, Sequence

from .bits import elements, lex_key, popcount, to_mask
from .certificate import Certificate
from .config import DEFAULT_LIMITS, Clock, Limits
from .core import Matroid
from .errors import InternalConsistency, InvalidParameter, ResourceLimit
from .exchange import SwapMove

Monomial = tuple  # canonical: sorted by lex_key
Multidegree = tuple


def canonical(seq: Iterable) -> Monomial:
    return tuple(sorted((b if isinstance(b, int) else to_mask(b) for b in seq), key=lex_key))


def multidegree(m: Sequence[int], size: int) -> Multidegree:
    counts = [0] * size
    for b in m:
        for e in elements(b):
            counts[e] += 1
    return tuple(counts)


def _element_counts(m) -> Counter:
    c: Counter = Counter()
    for b in m:
        c.update(elements(b))
    return c


def im_member(m1: Sequence[int], m2: Sequence[int]) -> bool:
    """Whether ``m1 - m2`` lies in the toric ideal: equal degree and multidegree."""
    return len(m1) == len(m2) and _element_counts(m1) == _element_counts(m2)


# -- move generation ---------------------------------------------------------------
#
# Edges are recorded so that paths can be turned into SwapMoves later.  In the
# unordered space an edge is (X, Y, e, f) over basis *values*; in the ordered
# space it is (i, j, e, f) over positions.

def _swap_pairs(m: Matroid, x: int, y: int) -> Iterator[tuple[int, int, int, int]]:
    only_x = x & ~y
    only_y = y & ~x
    for e in elements(only_x):
        base_x = x & ~(1 << e)
        for f in elements(only_y):
            nx = base_x | (1 << f)
            if not m.is_basis(nx):
                continue
            ny = (y & ~(1 << f)) | (1 << e)
            if m.is_basis(ny):
                yield e, f, nx, ny


def expand_unordered(m: Matroid, node: Monomial):
    """(child, edge) for every double swap on a pair of factors; self-loops omitted."""
    n = len(node)
    seen_pairs = set()
    for i in range(n):
        x = node[i]
        for j in range(i + 1, n):
            y = node[j]
            if x == y or (x, y) in seen_pairs:
                continue
            seen_pairs.add((x, y))
            rest = node[:i] + node[i + 1 : j] + node[j + 1 :]
            for e, f, nx, ny in _swap_pairs(m, x, y):
                yield canonical(rest + (nx, ny)), (x, y, e, f)


def expand_ordered(m: Matroid, node: tuple):
    """Double swaps at position pairs, with no reordering of the sequence."""
    n = len(node)
    for i in range(n):
        for j in range(i + 1, n):
            x, y = node[i], node[j]
            if x == y:
                continue
            for e, f, nx, ny in _swap_pairs(m, x, y):
                child = list(node)
                child[i], child[j] = nx, ny
                yield tuple(child), (i, j, e, f)


def _reverse_unordered(edge):
    x, y, e, f = edge
    return ((x & ~(1 << e)) | (1 << f), (y & ~(1 << f)) | (1 << e), f, e)


def _reverse_ordered(edge):
    i, j, e, f = edge
    return (i, j, f, e)


def neighbors(m: Sequence[int], matroid: Matroid) -> list[Monomial]:
    """Distinct monomials one double swap away from ``m`` (``m`` itself excluded)."""
    node = canonical(m)
    out: dict = {}
    for child, _ in expand_unordered(matroid, node):
        if child != node and child not in out:
            out[child] = None
    return list(out)


# -- searches -----------------------------------------------------------------------

def bidirectional_path(
    start: Hashable,
    goal: Hashable,
    expand: Callable,
    reverse: Callable,
    cap: int,
    clock: Optional[Clock] = None,
) -> Optional[list]:
    """Shortest edge path ``start -> goal`` or None when unreachable.

    Frontiers grow a full level at a time, the smaller side first; among the
    collisions of the first level that meets, the one with least total depth
    wins, which keeps the path shortest.
    """
    if start == goal:
        return []
    sides = [({start: None}, {start: 0}, [start]), ({goal: None}, {goal: 0}, [goal])]
    visited = 2
    while sides[0][2] and sides[1][2]:
        s = 0 if len(sides[0][2]) <= len(sides[1][2]) else 1
        parents, depth, frontier = sides[s]
        o_parents, o_depth, _ = sides[1 - s]
        nxt = []
        best = None
        for node in frontier:
            d = depth[node] + 1
            for child, edge in expand(node):
                if clock is not None:
                    clock.tick()
                if child in parents:
                    continue
                parents[child] = (node, edge)
                depth[child] = d
                nxt.append(child)
                visited += 1
                if child in o_parents:
                    total = d + o_depth[child]
                    if best is None or total < best[0]:
                        best = (total, child)
                if visited > cap:
                    raise ResourceLimit(f"fiber search exceeded cap of {cap} nodes", cap=cap)
        sides[s] = (parents, depth, nxt)
        if best is not None:
            meet = best[1]
            fwd_parents, bwd_parents = sides[0][0], sides[1][0]
            head = []
            node = meet
            while fwd_parents[node] is not None:
                node, edge = fwd_parents[node]
                head.append(edge)
            head.reverse()
            tail = []
            node = meet
            while bwd_parents[node] is not None:
                node, edge = bwd_parents[node]
                tail.append(reverse(edge))
            return head + tail
    return None


def edges_to_moves(start: Sequence[int], edges: list, ordered: bool) -> list[SwapMove]:
    """Turn a search path into position-based moves on ``start``."""
    if ordered:
        return [SwapMove(i, j, e, f) for i, j, e, f in edges]
    work = list(start)
    moves = []
    for x, y, e, f in edges:
        try:
            p = work.index(x)
            q = next(k for k, b in enumerate(work) if b == y and k != p)
        except (ValueError, StopIteration):
            raise InternalConsistency("search path does not match the working sequence") from None
        moves.append(SwapMove(p, q, e, f))
        work[p] = (x & ~(1 << e)) | (1 << f)
        work[q] = (y & ~(1 << f)) | (1 << e)
    return moves


def jm_member(
    m1: Sequence[int],
    m2: Sequence[int],
    matroid: Matroid,
    limits: Limits = DEFAULT_LIMITS,
) -> Optional[Certificate]:
    """Shortest double-swap certificate from ``m1`` to ``m2``, or None if disconnected."""
    a, b = canonical(m1), canonical(m2)
    if not im_member(a, b):
        raise InvalidParameter("binomial is not in the toric ideal (multidegrees differ)")
    for x in a:
        if not matroid.is_basis(x):
            raise InvalidParameter(f"{elements(x)} is not a basis")
    path = bidirectional_path(
        a, b, lambda node: expand_unordered(matroid, node), _reverse_unordered,
        limits.max_fiber_nodes, limits.clock(),
    )
    if path is None:
        return None
    return Certificate(a, b, tuple(edges_to_moves(a, path, False)), matroid.fingerprint)


def ordered_path(
    s1: Sequence[int], s2: Sequence[int], matroid: Matroid, limits: Limits = DEFAULT_LIMITS
) -> Optional[Certificate]:
    """Like ``jm_member`` but on sequences: swaps may not reorder positions."""
    a, b = tuple(s1), tuple(s2)
    if not im_member(a, b):
        raise InvalidParameter("sequences are not compatible")
    path = bidirectional_path(
        a, b, lambda node: expand_ordered(matroid, node), _reverse_ordered,
        limits.max_fiber_nodes, limits.clock(),
    )
    if path is None:
        return None
    return Certificate(a, b, tuple(edges_to_moves(a, path, True)), matroid.fingerprint, ordered=True)


# -- fibers -------------------------------------------------------------------------

def fiber_enumerate(
    matroid: Matroid,
    d: Sequence[int],
    degree: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
) -> list[Monomial]:
    """All canonical monomials of multidegree ``d``, in lexicographic order.

    ``degree`` is inferred from ``sum(d) / rank`` and is required only for
    rank-0 matroids.
    """
    d = tuple(int(x) for x in d)
    if len(d) != matroid.size or any(x < 0 for x in d):
        raise InvalidParameter(f"multidegree must have {matroid.size} non-negative entries")
    r = matroid.rank
    if degree is None:
        if r == 0:
            raise InvalidParameter("degree must be given for a rank-0 matroid")
        if sum(d) % r:
            return []
        degree = sum(d) // r
    if sum(d) != degree * r:
        return []
    bases = matroid.bases(limits)
    cap = limits.max_fiber_nodes
    out: list[Monomial] = []
    counts = list(d)
    chosen: list[int] = []
    clock = limits.clock()

    def rec(start: int, left: int) -> None:
        if left == 0:
            out.append(tuple(chosen))
            if len(out) > cap:
                raise ResourceLimit(f"fiber enumeration exceeded cap of {cap} nodes", cap=cap)
            return
        allowed = 0
        must = 0
        for e, c in enumerate(counts):
            if c > left:
                return
            if c:
                allowed |= 1 << e
                if c == left:
                    must |= 1 << e
        for k in range(start, len(bases)):
            b = bases[k]
            if b & ~allowed or must & ~b:
                continue
            clock.tick()
            for e in elements(b):
                counts[e] -= 1
            chosen.append(b)
            rec(k, left - 1)
            chosen.pop()
            for e in elements(b):
                counts[e] += 1

    rec(0, degree)
    return out


def components(nodes: Sequence, expand: Callable, clock: Optional[Clock] = None) -> list[list]:
    """Connected components of the move graph restricted to ``nodes``.

    Components are listed by their first node in ``nodes`` order; members keep
    that order too.
    """
    index = {v: k for k, v in enumerate(nodes)}
    label = [-1] * len(nodes)
    comps: list[list[int]] = []
    for k in range(len(nodes)):
        if label[k] >= 0:
            continue
        cid = len(comps)
        label[k] = cid
        members = [k]
        stack = [nodes[k]]
        while stack:
            v = stack.pop()
            for child, _ in expand(v):
                if clock is not None:
                    clock.tick()
                c = index.get(child)
                if c is None:
                    raise InternalConsistency("a move left its fiber")
                if label[c] < 0:
                    label[c] = cid
                    members.append(c)
                    stack.append(child)
        comps.append(sorted(members))
    return [[nodes[k] for k in comp] for comp in comps]


def _eccentricity(src, expand):
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for v in frontier:
            for child, _ in expand(v):
                if child not in dist:
                    dist[child] = dist[v] + 1
                    nxt.append(child)
        frontier = nxt
    return max(dist.values())


@dataclass
class FiberReport:
    multidegree: tuple
    degree: int
    node_count: int
    component_count: int
    component_sizes: list
    diameter: Optional[int] = None
    elapsed: Optional[float] = field(default=None, compare=False)

    def to_json(self) -> dict:
        doc = {
            "multidegree": list(self.multidegree),
            "degree": self.degree,
            "node_count": self.node_count,
            "component_count": self.component_count,
            "component_sizes": list(self.component_sizes),
            "diameter": self.diameter,
        }
        if self.elapsed is not None:
            doc["elapsed"] = round(self.elapsed, 6)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "FiberReport":
        return cls(
            multidegree=tuple(doc["multidegree"]),
            degree=int(doc["degree"]),
            node_count=int(doc["node_count"]),
            component_count=int(doc["component_count"]),
            component_sizes=list(doc["component_sizes"]),
            diameter=doc.get("diameter"),
            elapsed=doc.get("elapsed"),
        )


def connected_components(
    matroid: Matroid,
    d: Sequence[int],
    degree: Optional[int] = None,
    limits: Limits = DEFAULT_LIMITS,
    diameter: bool = False,
    timed: bool = True,
) -> FiberReport:
    """Component structure of one fiber under double swaps."""
    t0 = time.perf_counter()
    nodes = fiber_enumerate(matroid, d, degree, limits)
    if degree is None:
        degree = sum(d) // matroid.rank if matroid.rank else 0
    expand = lambda node: expand_unordered(matroid, node)  # noqa: E731
    comps = components(nodes, expand, limits.clock())
    sizes = [len(c) for c in comps]
    diam = None
    if diameter and comps:
        largest = max(comps, key=len)
        diam = max(_eccentricity(v, expand) for v in largest)
    return FiberReport(
        multidegree=tuple(d),
        degree=degree,
        node_count=len(nodes),
        component_count=len(comps),
        component_sizes=sizes,
        diameter=diam,
        elapsed=time.perf_counter() - t0 if timed else None,
    )
