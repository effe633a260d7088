from collections import deque
from itertools import combinations, combinations_with_replacement, permutations, product

import pytest

from matroidlab.bits import elements, popcount, to_mask
from matroidlab.catalog import POLYMATROID_FIXTURES, graphic_two_tree_fixtures, k4
from matroidlab.certificate import verify_certificate
from matroidlab.config import Limits
from matroidlab.conjectures import (
    FAILS,
    INCONCLUSIVE,
    DiscretePolymatroid,
    PolySwap,
    TEReport,
    commutation_check,
    cyclic_ordering,
    direct_sum_harness,
    lift_sequence,
    polymatroid_compatible,
    polymatroid_swap_correspondence,
    polymatroid_to_matroid,
    rotation_certificate,
    te_check,
    te_hierarchy,
    windows_are_bases,
)
from matroidlab.core import GroundSet, Matroid, direct_sum, explicit, graphic, uniform, verify_axioms
from matroidlab.errors import InvalidParameter, ValidationError
from matroidlab.exchange import swap_sets
from matroidlab.fiber import multidegree

U24 = uniform(2, 4)


class FamilyOracle(Matroid):
    """Independence oracle for an arbitrary set family (used to build non-matroids)."""

    def __init__(self, family, n):
        super().__init__()
        self.family = [to_mask(s) for s in family]
        self.ground = GroundSet(n)
        self.rank = popcount(self.family[0])
        self.definition = {"type": "family", "sets": sorted(self.family)}

    def _independent(self, mask):
        return any(mask & b == mask for b in self.family)


def ordered_connected(m, nodes):
    """Brute-force connectivity of a set of basis sequences under positional double swaps."""
    nodes = set(nodes)
    start = next(iter(nodes))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for i, j in permutations(range(len(u)), 2):
            for e in elements(u[i]):
                for f in elements(u[j]):
                    x, y = swap_sets(u[i], u[j], e, f)
                    if m.is_basis(x) and m.is_basis(y):
                        v = list(u)
                        v[i], v[j] = x, y
                        v = tuple(v)
                        if v not in seen:
                            seen.add(v)
                            queue.append(v)
    return seen >= nodes


def te1_oracle(m, n):
    """All degree-2..n fibers connected under swaps without reordering."""
    for deg in range(2, n + 1):
        groups = {}
        for seq in product(m.bases(), repeat=deg):
            groups.setdefault(multidegree(seq, m.size), []).append(seq)
        for seqs in groups.values():
            if not ordered_connected(m, seqs):
                return False
    return True


class TestTE:
    def test_uniform_variant_two(self):
        rep = te_check(U24, 2, 2)
        assert rep.verdict == "holds-up-to-2"
        assert rep.fibers_examined >= 1
        assert rep.disconnected == []

    @pytest.mark.parametrize("variant", [1, 2, 3])
    def test_degree_one_vacuous(self, variant):
        rep = te_check(k4(), 1, variant)
        assert rep.verdict == "holds-up-to-1" and rep.fibers_examined == 0

    def test_k4_variant_two(self):
        assert te_check(k4(), 2, 2).holds

    @pytest.mark.parametrize("m", [U24, k4(), graphic(3, [(0, 1), (1, 2), (0, 2)]), uniform(2, 5)])
    def test_variant_one_against_oracle(self, m):
        assert te_check(m, 2, 1).holds == te1_oracle(m, 2)

    def test_bad_variant(self):
        with pytest.raises(InvalidParameter):
            te_check(U24, 2, 4)

    def test_disconnected_fiber_reported(self):
        # not a matroid: no single swap leaves {0123, 4567}, so its fiber splits in two
        m = FamilyOracle([{0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 4, 5}, {2, 3, 6, 7}], 8)
        for variant in (1, 2):
            rep = te_check(m, 2, variant)
            assert rep.verdict == FAILS
            split = [d for d in rep.disconnected if d["multidegree"] == [1] * 8]
            assert split and split[0]["components"] >= 2
            assert rep.witness["representatives"]

    def test_uniform_sum_variant_one_against_oracle(self):
        m = direct_sum(uniform(1, 2), uniform(1, 2))
        assert te_check(m, 2, 1).holds == te1_oracle(m, 2)

    def test_cap_gives_inconclusive(self):
        rep = te_check(uniform(3, 6), 3, 2, Limits(max_fiber_nodes=10))
        assert rep.verdict == INCONCLUSIVE

    def test_report_roundtrip(self):
        rep = te_check(k4(), 2, 3)
        assert TEReport.from_json(rep.to_json()).to_json() == rep.to_json()

    def test_parallel_matches_serial(self):
        a = te_check(k4(), 3, 2, jobs=1)
        b = te_check(k4(), 3, 2, jobs=2)
        assert a.to_json() == b.to_json()

    def test_hierarchy_k4(self):
        h = te_hierarchy(k4(), 2)
        assert h["violations"] == []
        assert all(r.holds for r in h["reports"].values())


class TestCommutation:
    def test_equal(self):
        assert commutation_check(U24, 0b0011, 0b0011).moves == ()

    def test_uniform(self):
        cert = commutation_check(U24, 0b0011, 0b1100)
        assert cert is not None and verify_certificate(U24, cert).ok

    def test_rank_zero(self):
        assert commutation_check(uniform(0, 2), 0, 0).moves == ()


class TestCyclic:
    def test_uniform(self):
        order = cyclic_ordering(U24)
        assert windows_are_bases(U24, order)

    @pytest.mark.parametrize("name,m", graphic_two_tree_fixtures(), ids=[n for n, _ in graphic_two_tree_fixtures()])
    def test_two_tree_graphs(self, name, m):
        order = cyclic_ordering(m)
        assert order is not None and windows_are_bases(m, order)
        assert verify_certificate(m, rotation_certificate(m, order)).ok

    @pytest.mark.parametrize("r", [1, 2, 3])
    def test_uniform_family(self, r):
        m = uniform(r, 2 * r)
        order = cyclic_ordering(m)
        assert windows_are_bases(m, order)

    def test_loop_rejected(self):
        with pytest.raises(InvalidParameter):
            cyclic_ordering(graphic(2, [(0, 1), (1, 1)]))

    def test_windows_check_independent(self):
        # in K4 a star followed by its complement puts a triangle in a window
        assert not windows_are_bases(k4(), (0, 1, 2, 3, 4, 5))

    def test_exhaustive_against_search(self):
        m = k4()
        rotations = [p for p in permutations(range(6)) if p[0] == 0 and windows_are_bases(m, p)]
        assert rotations
        assert tuple(cyclic_ordering(m)) in rotations


class TestDirectSum:
    def test_uniform_12(self):
        rep = direct_sum_harness(uniform(1, 2))
        assert rep.consistent is True

    def test_uniform_24(self):
        assert direct_sum_harness(U24, 2).consistent is True

    def test_rank_zero(self):
        assert direct_sum_harness(uniform(0, 2)).consistent is True

    def test_wording(self):
        doc = direct_sum_harness(uniform(1, 2)).to_json()
        assert "consistent with" in doc["summary"]


def brute_mp_bases(p):
    n, r = p.n, p.rank
    out = set()
    for s in combinations(range(n * r), r):
        counts = tuple(sum(1 for e in s if e % n == c) for c in range(n))
        if counts in set(p.bases):
            out.add(to_mask(s))
    return out


class TestPolymatroid:
    def test_uniform_like(self):
        p = DiscretePolymatroid(2, ((2, 0), (1, 1), (0, 2)))
        mp = polymatroid_to_matroid(p)
        assert len(mp.bases()) == 6
        assert set(mp.bases()) == brute_mp_bases(p)

    def test_single_base(self):
        p = DiscretePolymatroid(3, ((2, 0, 0),))
        mp = polymatroid_to_matroid(p)
        assert [elements(b) for b in mp.bases()] == [(0, 3)]

    @pytest.mark.parametrize("p", POLYMATROID_FIXTURES)
    def test_fixtures(self, p):
        mp = polymatroid_to_matroid(p)
        assert set(mp.bases()) == brute_mp_bases(p)
        assert verify_axioms(mp.bases())[0]

    def test_invalid_polymatroid(self):
        with pytest.raises(ValidationError):
            DiscretePolymatroid(2, ((2, 0), (0, 2)))
        with pytest.raises(InvalidParameter):
            DiscretePolymatroid(2, ((2, 0), (0, 1)))

    @pytest.mark.parametrize("p", POLYMATROID_FIXTURES)
    def test_compatibility_transfers(self, p):
        mp = polymatroid_to_matroid(p)
        seqs = list(product(p.bases, repeat=2))
        for s1, s2 in combinations(seqs, 2):
            l1, l2 = lift_sequence(p, s1), lift_sequence(p, s2)
            assert all(mp.is_basis(x) for x in l1 + l2)
            compat_m = multidegree(l1, mp.size) == multidegree(l2, mp.size)
            assert polymatroid_compatible(s1, s2) == compat_m
        # and back: projecting compatible M_P sequences gives compatible P sequences
        for x in combinations_with_replacement(mp.bases(), 2):
            for y in combinations_with_replacement(mp.bases(), 2):
                if multidegree(x, mp.size) == multidegree(y, mp.size):
                    assert polymatroid_compatible([mp.column_counts(b) for b in x], [mp.column_counts(b) for b in y])

    def test_swap_within_column(self):
        p = DiscretePolymatroid(2, ((2, 0), (1, 1), (0, 2)))
        mp = polymatroid_to_matroid(p)
        # elements 0 and 2 are both in column 0
        x1, x2 = to_mask({0, 1}), to_mask({2, 3})
        assert polymatroid_swap_correspondence(p, (x1, x2), 0, 2, mp) == []

    def test_identity_swap(self):
        p = DiscretePolymatroid(2, ((2, 0), (1, 1), (0, 2)))
        x = to_mask({0, 1})
        assert polymatroid_swap_correspondence(p, (x, x), 0, 0) == []

    def test_one_unit_swap(self):
        p = DiscretePolymatroid(2, ((2, 0), (1, 1), (0, 2)))
        x1, x2 = to_mask({0, 2}), to_mask({1, 3})  # (2,0) and (0,2)
        assert polymatroid_swap_correspondence(p, (x1, x2), 0, 1) == [PolySwap(0, 1)]

    @pytest.mark.parametrize("p", POLYMATROID_FIXTURES)
    def test_all_swaps_short(self, p):
        mp = polymatroid_to_matroid(p)
        for x1, x2 in product(mp.bases(), repeat=2):
            for e in elements(x1):
                for f in elements(x2):
                    y1, y2 = swap_sets(x1, x2, e, f)
                    if popcount(y1) == mp.rank and mp.is_basis(y1) and mp.is_basis(y2):
                        swaps = polymatroid_swap_correspondence(p, (x1, x2), e, f, mp)
                        assert len(swaps) <= 2

    def test_lift_rejects_non_base(self):
        p = DiscretePolymatroid(2, ((1, 1),))
        with pytest.raises(InvalidParameter):
            lift_sequence(p, [(2, 0)])


def test_explicit_non_sbo_still_checked():
    m = explicit([list(elements(b)) for b in k4().bases()])
    assert te_check(m, 2, 2).holds
