from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import fsets, masks
from matroidlab.bits import elements, lex_key, to_mask
from matroidlab.catalog import K4_EDGES, TRANSVERSAL_SETS, k4
from matroidlab.config import Limits
from matroidlab.core import (
    direct_sum,
    dual,
    enumerate_bases,
    explicit,
    graphic,
    is_basis,
    linear,
    minor,
    transversal,
    uniform,
    verify_axioms,
)
from matroidlab.errors import InvalidParameter, ResourceLimit, ValidationError

TRIANGLE = [(0, 1), (1, 2), (0, 2)]


class TestUniform:
    def test_counts(self):
        assert len(enumerate_bases(uniform(2, 4))) == 6
        assert enumerate_bases(uniform(0, 3)) == [0]
        assert enumerate_bases(uniform(3, 3)) == [0b111]

    def test_lex_order(self):
        bases = enumerate_bases(uniform(2, 4))
        assert elements(bases[0]) == (0, 1)
        assert elements(bases[-1]) == (2, 3)
        assert [elements(b) for b in bases] == list(combinations(range(4), 2))

    def test_rank_zero(self):
        assert enumerate_bases(uniform(0, 5)) == [0]

    @pytest.mark.parametrize("r,n", [(-1, 3), (4, 3), (0, -1)])
    def test_bad_parameters(self, r, n):
        with pytest.raises(InvalidParameter):
            uniform(r, n)

    def test_is_basis(self):
        m = uniform(2, 4)
        assert is_basis(m, {0, 1})
        assert not is_basis(m, {0})


class TestGraphic:
    def test_triangle(self):
        m = graphic(3, TRIANGLE)
        assert len(enumerate_bases(m)) == 3
        assert not is_basis(m, {0, 1, 2})

    def test_k4_against_bruteforce(self):
        m = k4()
        got = fsets(enumerate_bases(m))
        assert got == oracles.graphic_bases(4, K4_EDGES)
        assert len(got) == 4 ** (4 - 2)

    def test_single_loop(self):
        m = graphic(1, [(0, 0)])
        assert m.rank == 0
        assert enumerate_bases(m) == [0]

    def test_bad_vertex(self):
        with pytest.raises(InvalidParameter):
            graphic(2, [(0, 5)])

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=6))
    def test_random_multigraphs(self, edges):
        m = graphic(4, edges)
        assert fsets(enumerate_bases(m)) == oracles.graphic_bases(4, edges)


class TestLinear:
    def test_identity(self):
        m = linear(2, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert enumerate_bases(m) == enumerate_bases(uniform(3, 3))

    def test_gf2_example(self):
        m = linear(2, [[1, 0, 1], [0, 1, 1]])
        assert fsets(enumerate_bases(m)) == {frozenset(s) for s in combinations(range(3), 2)}

    def test_zero_column_is_a_loop(self):
        m = linear(3, [[1, 0, 2], [0, 0, 1]])
        assert all(not b >> 1 & 1 for b in enumerate_bases(m))

    def test_non_prime(self):
        with pytest.raises(InvalidParameter):
            linear(4, [[1, 0], [0, 1]])

    @settings(max_examples=40, deadline=None)
    @given(
        st.sampled_from([2, 3]),
        st.integers(1, 3).flatmap(
            lambda rows: st.lists(
                st.lists(st.integers(0, 4), min_size=5, max_size=5), min_size=rows, max_size=rows
            )
        ),
    )
    def test_random_matrices(self, p, matrix):
        matrix = [[x % p for x in row] for row in matrix]
        m = linear(p, matrix)
        assert fsets(enumerate_bases(m)) == oracles.linear_bases(p, matrix)


class TestTransversal:
    def test_product(self):
        m = transversal([[0, 1], [2, 3]], 4)
        assert fsets(enumerate_bases(m)) == {frozenset({x, y}) for x in (0, 1) for y in (2, 3)}

    def test_single_set(self):
        m = transversal([[0, 1, 2]])
        assert m.rank == 1 and len(enumerate_bases(m)) == 3

    def test_repeated_singleton(self):
        assert transversal([[0], [0]]).rank == 1

    @pytest.mark.parametrize("name", sorted(TRANSVERSAL_SETS))
    def test_fixtures_against_bruteforce(self, name):
        sets, n = TRANSVERSAL_SETS[name]
        assert fsets(enumerate_bases(transversal(sets, n))) == oracles.transversal_bases(sets, n)


class TestDualSumMinor:
    def test_dual_uniform(self):
        m = dual(uniform(2, 4))
        full = 0b1111
        assert set(enumerate_bases(m)) == {full & ~b for b in enumerate_bases(uniform(2, 4))}
        assert len(enumerate_bases(m)) == 6

    def test_dual_involution(self):
        assert enumerate_bases(dual(dual(k4()))) == enumerate_bases(k4())

    def test_dual_rank_zero(self):
        assert enumerate_bases(dual(uniform(0, 3))) == enumerate_bases(uniform(3, 3))

    def test_direct_sum(self):
        m = direct_sum(uniform(1, 2), uniform(1, 2))
        assert m.size == 4 and len(enumerate_bases(m)) == 4
        assert len(enumerate_bases(direct_sum(uniform(2, 4), uniform(2, 4)))) == 36

    def test_direct_sum_identity(self):
        m = direct_sum(k4(), uniform(0, 0))
        assert enumerate_bases(m) == enumerate_bases(k4())

    def test_contract_and_delete(self):
        c = minor(uniform(2, 4), contracted=[0])
        assert (c.size, c.rank, len(enumerate_bases(c))) == (3, 1, 3)
        d = minor(uniform(2, 4), deleted=[0])
        assert (d.size, d.rank, len(enumerate_bases(d))) == (3, 2, 3)

    @pytest.mark.parametrize("e", range(6))
    def test_contraction_dual_is_deletion_of_dual(self, e):
        left = dual(minor(k4(), contracted=[e]))
        right = minor(dual(k4()), deleted=[e])
        assert enumerate_bases(left) == enumerate_bases(right)

    def test_minor_against_definition(self):
        # bases of M/C\D are the sets B with B | C a basis of M, for C independent and
        # D a set whose removal keeps the rank
        base = k4()
        m = minor(base, deleted=[5], contracted=[0])
        rest = [e for e in range(6) if e not in (0, 5)]
        expected = set()
        for b in enumerate_bases(base):
            s = set(elements(b))
            if 0 in s and 5 not in s:
                expected.add(frozenset(rest.index(x) for x in s - {0}))
        assert fsets(enumerate_bases(m)) == expected

    def test_minor_overlap_rejected(self):
        with pytest.raises(InvalidParameter):
            minor(uniform(2, 4), deleted=[0], contracted=[0])

    def test_contract_dependent_rejected(self):
        with pytest.raises(InvalidParameter):
            minor(graphic(3, TRIANGLE), contracted=[0, 1, 2])


class TestExplicitAndAxioms:
    def test_uniform_bases_pass(self):
        assert verify_axioms(enumerate_bases(uniform(2, 4))) == (True, None)

    def test_witness(self):
        ok, witness = verify_axioms(masks({0, 1}, {2, 3}))
        assert not ok
        assert witness == (to_mask({0, 1}), to_mask({2, 3}), 0)

    def test_single_basis(self):
        assert verify_axioms(masks({0, 1}))[0]

    def test_explicit_rejects_non_matroid(self):
        with pytest.raises(ValidationError) as info:
            explicit([[0, 1], [2, 3]])
        assert info.value.witness == {"B1": [0, 1], "B2": [2, 3], "e": 0}

    def test_explicit_roundtrip(self):
        bases = [list(elements(b)) for b in enumerate_bases(k4())]
        assert enumerate_bases(explicit(bases)) == enumerate_bases(k4())

    @settings(max_examples=60, deadline=None)
    @given(st.sets(st.frozensets(st.integers(0, 4), min_size=2, max_size=2), min_size=1, max_size=8))
    def test_axioms_agree_with_oracle(self, family):
        ok, witness = verify_axioms([to_mask(s) for s in family])
        assert ok == oracles.basis_pairs_exchange_ok(family)
        if not ok:
            b1, b2, e = witness
            fam = {to_mask(s) for s in family}
            assert not any(((b1 & ~(1 << e)) | (1 << f)) in fam for f in elements(b2 & ~b1))

    def test_every_constructor_satisfies_axioms(self):
        for m in [
            uniform(3, 6), k4(), linear(3, [[1, 0, 1, 1], [0, 1, 1, 2]]),
            transversal([[0, 1, 2], [1, 2, 3]]), dual(k4()), minor(k4(), [1], [2]),
            direct_sum(uniform(1, 2), graphic(3, TRIANGLE)),
        ]:
            assert verify_axioms(enumerate_bases(m))[0], m


class TestCapsAndFingerprint:
    def test_basis_cap(self):
        with pytest.raises(ResourceLimit):
            enumerate_bases(uniform(3, 7), Limits(max_bases=10))

    def test_fingerprint_is_structural(self):
        assert uniform(2, 4).fingerprint == uniform(2, 4).fingerprint
        assert uniform(2, 4).fingerprint != uniform(2, 5).fingerprint
        assert dual(uniform(2, 4)).fingerprint != uniform(2, 4).fingerprint

    def test_out_of_range(self):
        with pytest.raises(InvalidParameter):
            uniform(2, 4).is_independent(1 << 7)

    def test_lex_key_matches_combinations(self):
        m = uniform(3, 6)
        assert sorted(m.bases(), key=lex_key) == list(m.bases())
