"""Matroids given by independence oracles.

Elements of the ground set are the integers ``0..size-1`` and every set of
elements (in particular every basis) is an ``int`` bit vector.  Oracles are
immutable after construction; the only mutable state is a memo of basis
queries, which is safe to share.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Optional, Sequence

from .bits import elements, format_set, lex_key, popcount, to_mask
from .config import DEFAULT_LIMITS, Limits
from .errors import InvalidParameter, ResourceLimit, ValidationError

Basis = int


@dataclass(frozen=True)
class GroundSet:
    size: int
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 0:
            raise InvalidParameter("ground set size must be non-negative")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise InvalidParameter(f"expected {self.size} labels, got {len(self.labels)}")
            if len(set(self.labels)) != self.size:
                raise InvalidParameter("labels must be pairwise distinct")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def label(self, e: int) -> str:
        return self.labels[e] if self.labels else str(e)


def fingerprint_of(definition: dict) -> str:
    doc = json.dumps(definition, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(doc.encode()).hexdigest()


class Matroid:
    """Abstract independence oracle.

    Subclasses set ``ground``, ``rank`` and ``definition`` and implement
    ``_independent``.  ``definition`` is the JSON document that rebuilds the
    oracle; it is also what the fingerprint hashes.
    """

    ground: GroundSet
    rank: int
    definition: dict

    def __init__(self):
        self._basis_memo: dict[int, bool] = {}
        self._bases: Optional[tuple[int, ...]] = None

    @property
    def size(self) -> int:
        return self.ground.size

    @property
    def fingerprint(self) -> str:
        return fingerprint_of(self.definition)

    def _independent(self, mask: int) -> bool:
        raise NotImplementedError

    def is_independent(self, mask: int) -> bool:
        if mask >> self.size:
            raise InvalidParameter(f"set {format_set(mask)} is not inside the ground set")
        return self._independent(mask)

    def rank_of(self, mask: int) -> int:
        """Rank of a subset, by the greedy algorithm."""
        indep = 0
        for e in elements(mask):
            trial = indep | (1 << e)
            if self._independent(trial):
                indep = trial
        return popcount(indep)

    def is_basis(self, mask: int) -> bool:
        hit = self._basis_memo.get(mask)
        if hit is None:
            if mask >> self.size:
                raise InvalidParameter(f"set {format_set(mask)} is not inside the ground set")
            hit = popcount(mask) == self.rank and self._independent(mask)
            self._basis_memo[mask] = hit
        return hit

    def _enumerate(self, cap: int) -> list[int]:
        n, r = self.size, self.rank
        out: list[int] = []

        def extend(start: int, cur: int, k: int) -> None:
            if k == r:
                out.append(cur)
                if len(out) > cap:
                    raise ResourceLimit(f"basis enumeration exceeded cap of {cap} bases", cap=cap)
                return
            for e in range(start, n - (r - k) + 1):
                nxt = cur | (1 << e)
                if self._independent(nxt):
                    extend(e + 1, nxt, k + 1)

        extend(0, 0, 0)
        return out

    def bases(self, limits: Limits = DEFAULT_LIMITS) -> tuple[int, ...]:
        """All bases, lexicographic in their sorted element tuples."""
        if self._bases is None:
            found = self._enumerate(limits.max_bases)
            self._bases = tuple(found)
            for b in found:
                self._basis_memo[b] = True
        if len(self._bases) > limits.max_bases:
            raise ResourceLimit(
                f"basis enumeration exceeded cap of {limits.max_bases} bases", cap=limits.max_bases
            )
        return self._bases

    def __repr__(self):
        return f"<{type(self).__name__} size={self.size} rank={self.rank}>"


class UniformMatroid(Matroid):
    def __init__(self, r: int, n: int):
        super().__init__()
        if r < 0 or n < 0 or r > n:
            raise InvalidParameter(f"uniform matroid needs 0 <= r <= n, got r={r}, n={n}")
        self.ground = GroundSet(n)
        self.rank = r
        self.definition = {"type": "uniform", "r": r, "n": n}

    def _independent(self, mask):
        return popcount(mask) <= self.rank

    def _enumerate(self, cap):
        if comb(self.size, self.rank) > cap:
            raise ResourceLimit(f"basis enumeration exceeded cap of {cap} bases", cap=cap)
        return [to_mask(c) for c in combinations(range(self.size), self.rank)]


class _DSU:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; edge ``k`` is ground element ``k``."""

    def __init__(self, n_vertices: int, edges: Sequence[Sequence[int]]):
        super().__init__()
        if n_vertices < 0:
            raise InvalidParameter("vertex count must be non-negative")
        norm = []
        for k, edge in enumerate(edges):
            if len(edge) != 2:
                raise InvalidParameter(f"edge {k} must have two endpoints")
            u, v = int(edge[0]), int(edge[1])
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise InvalidParameter(f"edge {k} = ({u},{v}) has a vertex outside 0..{n_vertices - 1}")
            norm.append((u, v))
        self.n_vertices = n_vertices
        self.edges = tuple(norm)
        self.ground = GroundSet(len(norm))
        dsu = _DSU(n_vertices)
        merged = sum(dsu.union(u, v) for u, v in norm)
        self.rank = merged
        self.definition = {"type": "graphic", "vertices": n_vertices, "edges": [list(e) for e in norm]}

    def _independent(self, mask):
        dsu = _DSU(self.n_vertices)
        for k in elements(mask):
            u, v = self.edges[k]
            if not dsu.union(u, v):
                return False
        return True


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class LinearMatroid(Matroid):
    """Column matroid of a matrix over GF(p)."""

    def __init__(self, p: int, matrix: Sequence[Sequence[int]]):
        super().__init__()
        if not _is_prime(p):
            raise InvalidParameter(f"modulus {p} is not prime")
        rows = [list(map(int, row)) for row in matrix]
        ncols = len(rows[0]) if rows else 0
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise InvalidParameter(f"matrix row {i} has length {len(row)}, expected {ncols}")
            for x in row:
                if not 0 <= x < p:
                    raise InvalidParameter(f"matrix entry {x} not in [0, {p})")
        self.p = p
        self.matrix = tuple(tuple(r) for r in rows)
        self.columns = tuple(tuple(r[c] for r in rows) for c in range(ncols))
        self.ground = GroundSet(ncols)
        self.rank = self._column_rank((1 << ncols) - 1)
        self._echelon_cache: dict[int, tuple] = {}
        self.definition = {"type": "linear", "p": p, "matrix": [list(r) for r in rows]}

    def _eliminate(self, mask, stop_on_dependent):
        """Row-echelon pivots of the chosen columns.

        Returns None on the first dependent column when ``stop_on_dependent``.
        """
        p = self.p
        pivots: list[tuple[int, list[int]]] = []  # (pivot index, normalized vector)
        for c in elements(mask):
            v = list(self.columns[c])
            for idx, pv in pivots:
                if v[idx]:
                    f = v[idx]
                    v = [(a - f * b) % p for a, b in zip(v, pv)]
            lead = next((i for i, a in enumerate(v) if a), None)
            if lead is None:
                if stop_on_dependent:
                    return None
                continue
            inv = pow(v[lead], p - 2, p)
            pivots.append((lead, [(a * inv) % p for a in v]))
        return tuple((i, tuple(v)) for i, v in pivots)

    def _column_rank(self, mask):
        return len(self._eliminate(mask, False))

    def _independent(self, mask):
        if popcount(mask) > self.rank:
            return False
        if popcount(mask) == self.rank:
            if mask not in self._echelon_cache:
                self._echelon_cache[mask] = self._eliminate(mask, True)
            return self._echelon_cache[mask] is not None
        return self._eliminate(mask, True) is not None


def max_bipartite_matching(adjacency: Sequence[Sequence[int]], n_right: int) -> list[int]:
    """Maximum matching by augmenting paths (Kuhn).

    ``adjacency[u]`` lists the right vertices joined to left vertex ``u``.
    Returns ``match_right`` with the matched left vertex or -1.
    """
    match_right = [-1] * n_right

    def augment(u, seen):
        for w in adjacency[u]:
            if not seen[w]:
                seen[w] = True
                if match_right[w] < 0 or augment(match_right[w], seen):
                    match_right[w] = u
                    return True
        return False

    for u in range(len(adjacency)):
        augment(u, [False] * n_right)
    return match_right


class TransversalMatroid(Matroid):
    """Partial transversals of a set system; element ``e`` may represent set ``j`` iff ``e`` is in it."""

    def __init__(self, sets: Sequence[Iterable[int]], n: Optional[int] = None):
        super().__init__()
        norm = [tuple(sorted(set(int(x) for x in s))) for s in sets]
        top = max((max(s) for s in norm if s), default=-1) + 1
        if n is None:
            n = top
        if n < top or any(x < 0 for s in norm for x in s):
            raise InvalidParameter(f"set elements must lie in 0..{n - 1}")
        self.sets = tuple(norm)
        self.ground = GroundSet(n)
        self._member_of = [tuple(j for j, s in enumerate(norm) if e in s) for e in range(n)]
        self.rank = self._matching_size((1 << n) - 1)
        self.definition = {"type": "transversal", "n": n, "sets": [list(s) for s in norm]}

    def _matching_size(self, mask):
        adj = [self._member_of[e] for e in elements(mask)]
        return sum(1 for m in max_bipartite_matching(adj, len(self.sets)) if m >= 0)

    def _independent(self, mask):
        k = popcount(mask)
        return k <= len(self.sets) and self._matching_size(mask) == k


class DualMatroid(Matroid):
    def __init__(self, inner: Matroid):
        super().__init__()
        self.inner = inner
        self.ground = inner.ground
        self.rank = inner.size - inner.rank
        self.definition = {"type": "dual", "inner": inner.definition}

    def _independent(self, mask):
        return self.inner.rank_of(self.ground.full & ~mask) == self.inner.rank

    def _enumerate(self, cap):
        full = self.ground.full
        return sorted((full & ~b for b in self.inner.bases(DEFAULT_LIMITS.with_(max_bases=cap))), key=lex_key)


class DirectSum(Matroid):
    """Elements of ``right`` are re-indexed after those of ``left``."""

    def __init__(self, left: Matroid, right: Matroid):
        super().__init__()
        self.left, self.right = left, right
        self._shift = left.size
        self._low = (1 << left.size) - 1
        labels = None
        if left.ground.labels and right.ground.labels:
            labels = left.ground.labels + right.ground.labels
            if len(set(labels)) != len(labels):
                labels = None
        self.ground = GroundSet(left.size + right.size, labels)
        self.rank = left.rank + right.rank
        self.definition = {"type": "direct_sum", "left": left.definition, "right": right.definition}

    def _independent(self, mask):
        return self.left._independent(mask & self._low) and self.right._independent(mask >> self._shift)

    def _enumerate(self, cap):
        lim = DEFAULT_LIMITS.with_(max_bases=cap)
        lb, rb = self.left.bases(lim), self.right.bases(lim)
        if len(lb) * len(rb) > cap:
            raise ResourceLimit(f"basis enumeration exceeded cap of {cap} bases", cap=cap)
        return sorted((a | (b << self._shift) for a in lb for b in rb), key=lex_key)


class Minor(Matroid):
    """``inner / contracted \\ deleted`` with the surviving elements re-indexed densely."""

    def __init__(self, inner: Matroid, deleted: Iterable[int] = (), contracted: Iterable[int] = ()):
        super().__init__()
        d, c = to_mask(deleted), to_mask(contracted)
        if (d | c) >> inner.size:
            raise InvalidParameter("deleted/contracted elements must lie in the ground set")
        if d & c:
            raise InvalidParameter(f"deleted and contracted sets overlap in {format_set(d & c)}")
        if not inner.is_independent(c):
            raise InvalidParameter(f"contracted set {format_set(c)} is dependent")
        self.inner = inner
        self.deleted, self.contracted = d, c
        keep = inner.ground.full & ~(d | c)
        self._old = elements(keep)
        self.ground = GroundSet(len(self._old))
        self.rank = inner.rank_of(inner.ground.full & ~d) - popcount(c)
        self.definition = {
            "type": "minor",
            "inner": inner.definition,
            "deleted": list(elements(d)),
            "contracted": list(elements(c)),
        }

    def lift(self, mask: int) -> int:
        """Map a set of minor elements back to the inner ground set."""
        out = 0
        for e in elements(mask):
            out |= 1 << self._old[e]
        return out

    def _independent(self, mask):
        return self.inner._independent(self.lift(mask) | self.contracted)


class ExplicitMatroid(Matroid):
    """Matroid given by its list of bases; the list is validated on construction."""

    def __init__(self, bases: Sequence[Iterable[int]], n: Optional[int] = None):
        super().__init__()
        masks = [to_mask(b) for b in bases]
        ok, witness = verify_axioms(masks)
        if not ok:
            b1, b2, e = witness
            raise ValidationError(
                f"exchange axiom fails: B1={format_set(b1)}, B2={format_set(b2)}, e={e}",
                {"B1": list(elements(b1)), "B2": list(elements(b2)), "e": e},
            )
        top = max(m.bit_length() for m in masks)
        if n is None:
            n = top
        if n < top:
            raise InvalidParameter(f"basis element outside ground set of size {n}")
        uniq = sorted(set(masks), key=lex_key)
        self.ground = GroundSet(n)
        self.rank = popcount(uniq[0])
        self._basis_list = tuple(uniq)
        self._basis_lookup = frozenset(uniq)
        self.definition = {"type": "explicit", "n": n, "bases": [list(elements(b)) for b in uniq]}

    def _independent(self, mask):
        if popcount(mask) == self.rank:
            return mask in self._basis_lookup
        return any(mask & b == mask for b in self._basis_list)

    def _enumerate(self, cap):
        if len(self._basis_list) > cap:
            raise ResourceLimit(f"basis enumeration exceeded cap of {cap} bases", cap=cap)
        return list(self._basis_list)


# -- module-level operations ---------------------------------------------------

def uniform(r: int, n: int) -> UniformMatroid:
    return UniformMatroid(r, n)


def graphic(n_vertices: int, edges: Sequence[Sequence[int]]) -> GraphicMatroid:
    return GraphicMatroid(n_vertices, edges)


def linear(p: int, matrix: Sequence[Sequence[int]]) -> LinearMatroid:
    return LinearMatroid(p, matrix)


def transversal(sets: Sequence[Iterable[int]], n: Optional[int] = None) -> TransversalMatroid:
    return TransversalMatroid(sets, n)


def dual(m: Matroid) -> DualMatroid:
    return DualMatroid(m)


def direct_sum(m1: Matroid, m2: Matroid) -> DirectSum:
    return DirectSum(m1, m2)


def minor(m: Matroid, deleted: Iterable[int] = (), contracted: Iterable[int] = ()) -> Minor:
    return Minor(m, deleted, contracted)


def explicit(bases: Sequence[Iterable[int]], n: Optional[int] = None) -> ExplicitMatroid:
    return ExplicitMatroid(bases, n)


def is_basis(m: Matroid, s) -> bool:
    mask = s if isinstance(s, int) else to_mask(s)
    return m.is_basis(mask)


def enumerate_bases(m: Matroid, limits: Limits = DEFAULT_LIMITS) -> list[int]:
    return list(m.bases(limits))


def verify_axioms(bases: Sequence) -> tuple[bool, Optional[tuple[int, int, int]]]:
    """Check the basis exchange axiom on an explicit family.

    Returns ``(True, None)`` or ``(False, (B1, B2, e))`` for the first pair
    (in list order) and smallest ``e`` in ``B1 - B2`` with no valid ``f``.
    """
    masks = [b if isinstance(b, int) else to_mask(b) for b in bases]
    if not masks:
        raise InvalidParameter("basis family must be non-empty")
    k = popcount(masks[0])
    if any(popcount(m) != k for m in masks):
        raise InvalidParameter("all bases must have the same cardinality")
    seen = set()
    family = [m for m in masks if not (m in seen or seen.add(m))]
    lookup = set(family)
    for b1 in family:
        for b2 in family:
            if b1 == b2:
                continue
            for e in elements(b1 & ~b2):
                base = b1 & ~(1 << e)
                if not any(base | (1 << f) in lookup for f in elements(b2 & ~b1)):
                    return False, (b1, b2, e)
    return True, None
