"""Grading by distance from a reference basis, balancing, and saturation witnesses.

Relative to a fixed basis ``B`` every basis ``B'`` has B-degree
``|B' - B|``.  Bases of B-degree one are *balanced*.  ``balance`` rewrites
``y_B^(k-1) y_B'`` into ``k`` balanced variables by double swaps, and
``saturation_witness`` searches for the certificate showing that padding a
binomial with enough copies of ``y_B`` puts it in the double-swap ideal.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .bits import elements, format_set, popcount
from .certificate import Certificate
from .config import DEFAULT_LIMITS, Limits
from .core import Matroid
from .errors import FalsificationError, InternalConsistency, InvalidParameter, ResourceLimit
from .exchange import SwapMove, symmetric_exchange, try_double_swap
from .fiber import canonical, im_member, jm_member


def b_degree(b: int, x: Union[int, Sequence[int]]) -> int:
    """``|x - B|`` for a basis, summed over the factors of a monomial."""
    if isinstance(x, int):
        return popcount(x & ~b)
    return sum(popcount(y & ~b) for y in x)


def balance(m: Matroid, b: int, b_prime: int) -> tuple[list[int], Certificate]:
    """Balanced bases ``B_1..B_k`` (``k = deg_B(B')``) and a certificate.

    The certificate runs from the sequence ``[B]*(k-1) + [B']`` to the
    returned bases, in that order: position ``p < k-1`` ends as ``B_(p+1)``
    and the last position carries the final remainder.
    """
    if not (m.is_basis(b) and m.is_basis(b_prime)):
        raise InvalidParameter("both arguments must be bases")
    k = b_degree(b, b_prime)
    if k <= 1:
        return [b_prime], Certificate((b_prime,), (b_prime,), (), m.fingerprint)
    start = [b] * (k - 1) + [b_prime]
    seq = list(start)
    last = k - 1
    moves = []
    for pos in range(k - 1):
        cur = seq[last]
        e = elements(cur & ~b)[0]
        f = symmetric_exchange(m, cur, b, e)
        res = try_double_swap(m, cur, b, e, f)
        if res is None:
            raise InternalConsistency("symmetric exchange returned an invalid swap")
        seq[last], seq[pos] = res
        moves.append(SwapMove(last, pos, e, f))
    for x in seq:
        if b_degree(b, x) != 1:
            raise InternalConsistency(f"{format_set(x)} is not balanced")
    cert = Certificate(tuple(start), tuple(seq), tuple(moves), m.fingerprint)
    return seq, cert


@dataclass(frozen=True)
class BalancedMultigraph:
    """Edges ``(e, f)``: the factor ``B + e - f`` with ``e`` outside ``B`` and ``f`` in ``B``."""

    reference: int
    edges: tuple[tuple[int, int], ...]

    def degree(self, v: int) -> int:
        return sum((v == e) + (v == f) for e, f in self.edges)

    def degrees(self) -> Counter:
        c: Counter = Counter()
        for e, f in self.edges:
            c[e] += 1
            c[f] += 1
        return c


def build_balanced_multigraph(b: int, m: Sequence[int]) -> BalancedMultigraph:
    edges = []
    for x in m:
        if b_degree(b, x) != 1:
            raise InvalidParameter(f"factor {format_set(x)} is not balanced with respect to {format_set(b)}")
        (e,) = elements(x & ~b)
        (f,) = elements(b & ~x)
        edges.append((e, f))
    return BalancedMultigraph(b, tuple(sorted(edges)))


@dataclass(frozen=True)
class AlternatingCycle:
    """Closed walk ``f1, e1, f2, e2, ..., fr, er`` (back to ``f1``).

    ``(e_i, f_i)`` are edges of the first graph, ``(e_(i-1), f_i)`` of the second.
    """

    vertices: tuple[int, ...]

    @property
    def first_edges(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[k + 1], v[k]) for k in range(0, len(v), 2)]

    @property
    def second_edges(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[k - 1], v[k]) for k in range(0, len(v), 2)]


def alternating_cycle_decomposition(g: BalancedMultigraph, h: BalancedMultigraph) -> list[AlternatingCycle]:
    """Split the symmetric difference of two edge multisets into alternating closed walks.

    Walks start at the smallest reference-side vertex with unused edges and
    always take the smallest available neighbour.
    """
    if g.reference != h.reference:
        raise InvalidParameter("multigraphs use different reference bases")
    if g.degrees() != h.degrees():
        raise InvalidParameter("vertex degrees differ between the two multigraphs")
    cg, ch = Counter(g.edges), Counter(h.edges)
    only_g = cg - ch
    only_h = ch - cg
    cycles = []
    while +only_g:
        start = min(f for (e, f), c in only_g.items() if c > 0)
        walk = [start]
        f = start
        while True:
            e = min(e for (e, ff), c in only_g.items() if c > 0 and ff == f)
            only_g[(e, f)] -= 1
            walk.append(e)
            f = min(ff for (ee, ff), c in only_h.items() if c > 0 and ee == e)
            only_h[(e, f)] -= 1
            if f == start:
                break
            walk.append(f)
        cycles.append(AlternatingCycle(tuple(walk)))
        only_g, only_h = +only_g, +only_h
    if +only_h:
        raise InternalConsistency("second graph has edges left after decomposition")
    return cycles


@dataclass(frozen=True)
class SaturationWitness:
    certificate: Certificate
    reference: int
    exponent: int

    def to_json(self) -> dict:
        doc = self.certificate.to_json()
        doc["reference_basis"] = list(elements(self.reference))
        doc["exponent"] = self.exponent
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "SaturationWitness":
        from .bits import to_mask

        return cls(Certificate.from_json(doc), to_mask(doc["reference_basis"]), int(doc["exponent"]))


def saturation_exponent(b: int, m1: Sequence[int]) -> int:
    """``max(0, deg_B(m) - deg(m))``, the padding the saturation argument needs."""
    return max(0, b_degree(b, m1) - len(m1))


def _check_pair(m, m1, m2, b):
    if not m.is_basis(b):
        raise InvalidParameter(f"reference {format_set(b)} is not a basis")
    if not im_member(m1, m2):
        raise InvalidParameter("binomial is not in the toric ideal (multidegrees differ)")


def saturation_witness(
    m: Matroid,
    m1: Sequence[int],
    m2: Sequence[int],
    b: int,
    limits: Limits = DEFAULT_LIMITS,
) -> SaturationWitness:
    """Certificate connecting ``y_B^k m1`` and ``y_B^k m2`` in their fiber.

    Raises ``FalsificationError`` when the padded fiber is searched to
    exhaustion without connecting them and ``ResourceLimit`` when the search
    is cut off (inconclusive).
    """
    _check_pair(m, m1, m2, b)
    k = saturation_exponent(b, m1)
    p1 = canonical(tuple(m1) + (b,) * k)
    p2 = canonical(tuple(m2) + (b,) * k)
    cert = jm_member(p1, p2, m, limits)
    if cert is None:
        raise FalsificationError(
            f"padded monomials are disconnected with exponent {k} for reference {format_set(b)}"
        )
    return SaturationWitness(cert, b, k)


def min_saturation_exponent(
    m: Matroid,
    m1: Sequence[int],
    m2: Sequence[int],
    b: int,
    limits: Limits = DEFAULT_LIMITS,
    max_exponent: Optional[int] = None,
) -> int:
    """Smallest ``k >= 0`` for which the ``y_B^k``-padded monomials are connected."""
    _check_pair(m, m1, m2, b)
    bound = saturation_exponent(b, m1)
    top = max_exponent if max_exponent is not None else max(bound, 0) + len(m1) * m.rank
    k = 0
    while k <= top:
        try:
            cert = jm_member(canonical(tuple(m1) + (b,) * k), canonical(tuple(m2) + (b,) * k), m, limits)
        except ResourceLimit as exc:
            raise ResourceLimit(f"{exc}; largest exponent tried was {k}", cap=exc.cap) from exc
        if cert is not None:
            return k
        k += 1
    raise FalsificationError(f"no exponent up to {top} connects the padded monomials")
