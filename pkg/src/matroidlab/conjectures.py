"""Exhaustive checks of the exchange conjectures on small matroids.

Three relations on compatible basis sequences are compared:

* variant 1: double swaps at fixed positions, no reordering;
* variant 2: double swaps and arbitrary reordering (unordered monomials);
* variant 3: multiple symmetric exchanges between two factors.

Reports only ever say a property *holds up to degree n* or was observed to
fail on a concrete fiber.
"""

from __future__ import annotations

import os
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations
from math import comb
from typing import Optional, Sequence

from .bits import elements, format_set, popcount, subsets_by_size, to_mask
from .certificate import Certificate
from .config import DEFAULT_LIMITS, Limits
from .core import DirectSum, GroundSet, Matroid, verify_axioms
from .errors import (
    FalsificationError,
    InternalConsistency,
    InvalidParameter,
    ResourceLimit,
    ValidationError,
)
from .exchange import SwapMove
from .fiber import canonical, components, expand_ordered, expand_unordered, multidegree, ordered_path

HOLDS = "holds-up-to"  # reported as "holds-up-to-<n>"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

MULTI_EXCHANGE_DEFAULT_CAP = 6


def expand_multiple(m: Matroid, node: tuple, max_size: Optional[int] = None):
    """Children of an unordered monomial under multiple symmetric exchanges."""
    cap = min(m.rank, MULTI_EXCHANGE_DEFAULT_CAP) if max_size is None else max_size
    n = len(node)
    seen_pairs = set()
    out = set()
    for i in range(n):
        x = node[i]
        for j in range(i + 1, n):
            y = node[j]
            if x == y or (x, y) in seen_pairs:
                continue
            seen_pairs.add((x, y))
            rest = node[:i] + node[i + 1 : j] + node[j + 1 :]
            only_x, only_y = x & ~y, y & ~x
            for size in range(1, min(cap, popcount(only_x)) + 1):
                for a1 in subsets_by_size(only_x, size):
                    nx_base = x & ~a1
                    for a2 in subsets_by_size(only_y, size):
                        nx = nx_base | a2
                        if not m.is_basis(nx):
                            continue
                        ny = (y & ~a2) | a1
                        if m.is_basis(ny):
                            child = canonical(rest + (nx, ny))
                            if child not in out:
                                out.add(child)
                                yield child, None


@dataclass
class TEReport:
    variant: int
    max_degree: int
    fibers_examined: int = 0
    disconnected: list = field(default_factory=list)  # {"degree", "multidegree", "components"}
    inconclusive: list = field(default_factory=list)  # {"degree", "multidegree"|None, "reason"}
    verdict: str = ""
    witness: Optional[dict] = None
    per_fiber: Optional[dict] = None  # (degree, multidegree) -> component count

    def __post_init__(self):
        if not self.verdict:
            self.verdict = f"{HOLDS}-{self.max_degree}"

    @property
    def holds(self) -> bool:
        return self.verdict.startswith(HOLDS)

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "max_degree": self.max_degree,
            "fibers_examined": self.fibers_examined,
            "disconnected": self.disconnected,
            "inconclusive": self.inconclusive,
            "verdict": self.verdict,
            "witness": self.witness,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TEReport":
        return cls(
            variant=int(doc["variant"]),
            max_degree=int(doc["max_degree"]),
            fibers_examined=int(doc["fibers_examined"]),
            disconnected=list(doc["disconnected"]),
            inconclusive=list(doc["inconclusive"]),
            verdict=str(doc["verdict"]),
            witness=doc.get("witness"),
        )


def _fiber_nodes(monos: list, variant: int) -> list:
    if variant != 1:
        return monos
    nodes = []
    for mono in monos:
        nodes.extend(sorted(set(permutations(mono)), key=lambda t: [elements(b) for b in t]))
    return nodes


def _check_fiber(args):
    m, variant, monos, cap, multi_cap = args
    nodes = _fiber_nodes(monos, variant)
    if len(nodes) <= 1:
        return len(nodes), 1, None
    if len(nodes) > cap:
        return len(nodes), None, None
    if variant == 1:
        expand = lambda v: expand_ordered(m, v)  # noqa: E731
    elif variant == 2:
        expand = lambda v: expand_unordered(m, v)  # noqa: E731
    else:
        expand = lambda v: expand_multiple(m, v, multi_cap)  # noqa: E731
    comps = components(nodes, expand)
    witness = None
    if len(comps) > 1:
        witness = [[list(elements(b)) for b in comps[0][0]], [list(elements(b)) for b in comps[1][0]]]
    return len(nodes), len(comps), witness


def te_check(
    m: Matroid,
    n: int,
    variant: int,
    limits: Limits = DEFAULT_LIMITS,
    jobs: int = 1,
    multi_cap: Optional[int] = None,
    keep_details: bool = False,
) -> TEReport:
    """Connectivity of every fiber of degree ``2..n`` under the chosen relation."""
    if variant not in (1, 2, 3):
        raise InvalidParameter(f"variant must be 1, 2 or 3, got {variant}")
    if n < 1:
        raise InvalidParameter("degree must be at least 1")
    report = TEReport(variant, n, per_fiber={} if keep_details else None)
    try:
        bases = m.bases(limits)
    except ResourceLimit as exc:
        report.verdict = INCONCLUSIVE
        report.inconclusive.append({"degree": None, "multidegree": None, "reason": str(exc)})
        return report
    jobs_list = []
    for deg in range(2, n + 1):
        total = comb(len(bases) + deg - 1, deg)
        if total > limits.max_fiber_nodes:
            report.inconclusive.append(
                {"degree": deg, "multidegree": None, "reason": f"{total} monomials exceed the node cap"}
            )
            continue
        groups: OrderedDict = OrderedDict()
        for mono in combinations_with_replacement(bases, deg):
            groups.setdefault(multidegree(mono, m.size), []).append(mono)
        for md, monos in groups.items():
            trivial = len(monos) == 1 and (variant != 1 or len(set(monos[0])) == 1)
            if trivial:
                continue
            jobs_list.append((deg, md, monos))

    work = [(m, variant, monos, limits.max_fiber_nodes, multi_cap) for _, _, monos in jobs_list]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_check_fiber, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_check_fiber(w) for w in work]

    for (deg, md, _), (size, ncomp, witness) in zip(jobs_list, results):
        if ncomp is None:
            report.inconclusive.append(
                {"degree": deg, "multidegree": list(md), "reason": f"fiber of {size} nodes exceeds the cap"}
            )
            continue
        report.fibers_examined += 1
        if report.per_fiber is not None:
            report.per_fiber[(deg, md)] = ncomp
        if ncomp > 1:
            report.disconnected.append({"degree": deg, "multidegree": list(md), "components": ncomp})
            if report.witness is None:
                report.witness = {"degree": deg, "multidegree": list(md), "representatives": witness}
    if report.disconnected:
        report.verdict = FAILS
    elif report.inconclusive:
        report.verdict = INCONCLUSIVE
    return report


def te_hierarchy(m: Matroid, n: int, limits: Limits = DEFAULT_LIMITS, jobs: int = 1) -> dict:
    """Run all three variants and list fibers where connectivity is not monotone 1 => 2 => 3."""
    reports = {v: te_check(m, n, v, limits, jobs=jobs, keep_details=True) for v in (1, 2, 3)}
    violations = []
    keys = set()
    for r in reports.values():
        keys.update(r.per_fiber)
    for key in sorted(keys):
        conn = {}
        for v, r in reports.items():
            if key in r.per_fiber:
                conn[v] = r.per_fiber[key] == 1
            else:
                # skipped as trivial unless the fiber was cut off by a cap
                cut = any(
                    i.get("degree") == key[0] and (i.get("multidegree") in (None, list(key[1])))
                    for i in r.inconclusive
                )
                conn[v] = None if cut else True
        if conn[1] and conn[2] is False or conn[2] and conn[3] is False:
            violations.append({"degree": key[0], "multidegree": list(key[1]), "connected": conn})
    return {"reports": reports, "violations": violations}


def commutation_check(
    m: Matroid, b1: int, b2: int, limits: Limits = DEFAULT_LIMITS
) -> Optional[Certificate]:
    """Ordered swap path from ``(B1, B2)`` to ``(B2, B1)``, or None."""
    if not (m.is_basis(b1) and m.is_basis(b2)):
        raise InvalidParameter("both arguments must be bases")
    return ordered_path((b1, b2), (b2, b1), m, limits)


# -- cyclic orderings ----------------------------------------------------------------

def _two_basis_partition(m: Matroid) -> Optional[tuple[int, int]]:
    full = m.ground.full
    for b in m.bases():
        if m.is_basis(full & ~b):
            return b, full & ~b
    return None


def windows_are_bases(m: Matroid, order: Sequence[int]) -> bool:
    """Independent check that every run of ``rank`` cyclically consecutive elements is a basis."""
    k, r = len(order), m.rank
    if sorted(order) != list(range(m.size)):
        return False
    for s in range(k):
        window = {order[(s + t) % k] for t in range(r)}
        if len(window) != r or not m.is_independent(to_mask(window)):
            return False
    return True


def cyclic_ordering(m: Matroid, limits: Limits = DEFAULT_LIMITS) -> Optional[tuple[int, ...]]:
    """Circular arrangement whose every ``rank``-window is a basis, or None.

    Requires the ground set to be the union of two disjoint bases.  Element
    0 is pinned first and reflections are removed by demanding
    ``order[1] < order[-1]``.
    """
    size, r = m.size, m.rank
    if size != 2 * r or _two_basis_partition(m) is None:
        raise InvalidParameter("ground set is not the union of two disjoint bases")
    if size == 0:
        return ()
    if size == 2:
        return (0, 1)
    order = [0]
    used = 1
    clock = limits.clock()

    def tail_independent() -> bool:
        window = order[-r:] if len(order) >= r else order
        return m.is_independent(to_mask(window))

    def closing_ok() -> bool:
        for s in range(size - r + 1, size):
            window = [order[(s + t) % size] for t in range(r)]
            if not m.is_basis(to_mask(window)):
                return False
        return True

    def extend() -> bool:
        nonlocal used
        clock.tick()
        if len(order) == size:
            return order[1] < order[-1] and closing_ok()
        for e in range(1, size):
            if used >> e & 1:
                continue
            order.append(e)
            used |= 1 << e
            if tail_independent() and extend():
                return True
            order.pop()
            used &= ~(1 << e)
        return False

    if extend():
        return tuple(order)
    return None


def rotation_certificate(m: Matroid, order: Sequence[int]) -> Certificate:
    """Ordered certificate ``(W_0, W_r) -> (W_r, W_0)`` rotating the windows of a cyclic ordering."""
    k, r = len(order), m.rank

    def window(s):
        return to_mask(order[(s + t) % k] for t in range(r))

    start = (window(0), window(r))
    moves = tuple(SwapMove(0, 1, order[s], order[(s + r) % k]) for s in range(r))
    return Certificate(start, (start[1], start[0]), moves, m.fingerprint, ordered=True)


# -- M + M ---------------------------------------------------------------------------

@dataclass
class DirectSumReport:
    degree: int
    te1_m: str
    te1_mm: str
    te2_mm: str
    consistent: Optional[bool]

    def to_json(self) -> dict:
        if self.consistent is None:
            summary = "inconclusive: at least one check hit a cap"
        elif self.consistent:
            summary = "observed verdicts are consistent with the equivalence of the three conditions"
        else:
            summary = "observed verdicts are NOT consistent with the equivalence of the three conditions"
        return {
            "degree": self.degree,
            "M_in_TE1": self.te1_m,
            "MM_in_TE1": self.te1_mm,
            "MM_in_TE2": self.te2_mm,
            "consistent": self.consistent,
            "summary": summary,
        }


def direct_sum_harness(m: Matroid, n: int = 2, limits: Limits = DEFAULT_LIMITS, jobs: int = 1) -> DirectSumReport:
    mm = DirectSum(m, m)
    verdicts = [
        te_check(m, n, 1, limits, jobs).verdict,
        te_check(mm, n, 1, limits, jobs).verdict,
        te_check(mm, n, 2, limits, jobs).verdict,
    ]
    if INCONCLUSIVE in verdicts:
        consistent = None
    else:
        consistent = len(set(verdicts)) == 1
    return DirectSumReport(n, *verdicts, consistent)


# -- discrete polymatroids ---------------------------------------------------------

@dataclass(frozen=True)
class DiscretePolymatroid:
    n: int
    bases: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 0:
            raise InvalidParameter("dimension must be non-negative")
        if not self.bases:
            raise InvalidParameter("a polymatroid needs at least one base vector")
        norm = tuple(sorted(set(tuple(int(x) for x in v) for v in self.bases)))
        object.__setattr__(self, "bases", norm)
        for v in norm:
            if len(v) != self.n or any(x < 0 for x in v):
                raise InvalidParameter(f"base vector {list(v)} is not a non-negative vector of length {self.n}")
        if len({sum(v) for v in norm}) != 1:
            raise InvalidParameter("base vectors must have equal coordinate sums")
        bad = self.exchange_violation()
        if bad is not None:
            raise ValidationError(
                f"polymatroid exchange axiom fails for u={bad[0]}, v={bad[1]}, i={bad[2]}",
                {"u": bad[0], "v": bad[1], "i": bad[2]},
            )

    @property
    def rank(self) -> int:
        return sum(self.bases[0])

    def is_base(self, v) -> bool:
        return tuple(v) in set(self.bases)

    def is_independent(self, v) -> bool:
        return any(all(a <= b for a, b in zip(v, u)) for u in self.bases)

    def exchange_violation(self):
        lookup = set(self.bases)
        for u in self.bases:
            for v in self.bases:
                if u == v:
                    continue
                for i in range(self.n):
                    if u[i] <= v[i]:
                        continue
                    ok = False
                    for j in range(self.n):
                        if u[j] < v[j]:
                            w = list(u)
                            w[i] -= 1
                            w[j] += 1
                            if tuple(w) in lookup:
                                ok = True
                                break
                    if not ok:
                        return (list(u), list(v), i)
        return None

    def to_json(self) -> dict:
        return {"n": self.n, "bases": [list(v) for v in self.bases]}


class PolymatroidMatroid(Matroid):
    """Matroid on ``rank(P) * n`` elements; element ``level * n + coord`` sits in column ``coord``."""

    def __init__(self, p: DiscretePolymatroid):
        super().__init__()
        self.polymatroid = p
        self.levels = p.rank
        self.ground = GroundSet(p.rank * p.n)
        self.rank = p.rank
        self._independent_vectors = set()
        for u in p.bases:
            stack = [u]
            while stack:
                v = stack.pop()
                if v in self._independent_vectors:
                    continue
                self._independent_vectors.add(v)
                for i in range(p.n):
                    if v[i]:
                        stack.append(v[:i] + (v[i] - 1,) + v[i + 1 :])
        self.definition = {"type": "polymatroid", **p.to_json()}

    def column_counts(self, mask: int) -> tuple[int, ...]:
        counts = [0] * self.polymatroid.n
        for e in elements(mask):
            counts[e % self.polymatroid.n] += 1
        return tuple(counts)

    def _independent(self, mask):
        return self.column_counts(mask) in self._independent_vectors


def polymatroid_to_matroid(p: DiscretePolymatroid) -> PolymatroidMatroid:
    mp = PolymatroidMatroid(p)
    ok, witness = verify_axioms(mp.bases())
    if not ok:
        raise InternalConsistency(f"reduced matroid violates the exchange axiom at {witness}")
    return mp


def lift_sequence(p: DiscretePolymatroid, seq: Sequence[Sequence[int]]) -> list[int]:
    """Lift P-bases to bases of the reduced matroid.

    Units of each column are dealt to the sequence members round-robin over
    the levels, so the element multiset of the lift depends only on the
    column totals: P-compatible sequences lift to compatible sequences.
    """
    r, n = p.rank, p.n
    cursor = [0] * n
    out = []
    for v in seq:
        if not p.is_base(v):
            raise InvalidParameter(f"{list(v)} is not a base of the polymatroid")
        mask = 0
        for c in range(n):
            for _ in range(v[c]):
                mask |= 1 << ((cursor[c] % r) * n + c)
                cursor[c] += 1
        out.append(mask)
    return out


@dataclass(frozen=True)
class PolySwap:
    """Move one unit ``src -> dst`` in the first vector and ``dst -> src`` in the second."""

    src: int
    dst: int


def polymatroid_swap_correspondence(
    p: DiscretePolymatroid, pair: tuple[int, int], e: int, f: int, mp: Optional[PolymatroidMatroid] = None
) -> list[PolySwap]:
    """Express the projection of a valid double swap in the reduced matroid as P-swaps.

    Returns at most two swaps whose successive results are pairs of P-bases;
    anything else is reported as a falsification event.
    """
    mp = mp or PolymatroidMatroid(p)
    x1, x2 = pair
    if not (x1 >> e & 1 and x2 >> f & 1):
        raise InvalidParameter("e must lie in the first basis and f in the second")
    nx1 = (x1 & ~(1 << e)) | (1 << f)
    nx2 = (x2 & ~(1 << f)) | (1 << e)
    if not all(mp.is_basis(s) for s in (x1, x2, nx1, nx2)):
        raise InvalidParameter("not a valid double swap of the reduced matroid")
    u1, u2 = mp.column_counts(x1), mp.column_counts(x2)
    v1, v2 = mp.column_counts(nx1), mp.column_counts(nx2)
    delta = [b - a for a, b in zip(u1, v1)]
    if any(b - a != -d for a, b, d in zip(u2, v2, delta)):
        raise FalsificationError("projected swap does not conserve column totals")
    minus = [c for c, d in enumerate(delta) for _ in range(max(0, -d))]
    plus = [c for c, d in enumerate(delta) for _ in range(max(0, d))]
    if not minus:
        return []
    for plus_order in sorted(set(permutations(plus))):
        w1, w2 = list(u1), list(u2)
        swaps = []
        for src, dst in zip(minus, plus_order):
            w1[src] -= 1
            w1[dst] += 1
            w2[dst] -= 1
            w2[src] += 1
            if not (p.is_base(w1) and p.is_base(w2)):
                break
            swaps.append(PolySwap(src, dst))
        else:
            if len(swaps) <= 2:
                return swaps
    raise FalsificationError(
        f"swap ({format_set(x1)}, {format_set(x2)}, e={e}, f={f}) needs more than two P-swaps"
    )


def polymatroid_compatible(seq1: Sequence[Sequence[int]], seq2: Sequence[Sequence[int]]) -> bool:
    if len(seq1) != len(seq2):
        return False
    return [sum(c) for c in zip(*seq1)] == [sum(c) for c in zip(*seq2)]
