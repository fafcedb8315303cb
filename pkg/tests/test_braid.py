from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polybraid.braid import (
    BraidWord,
    alpha_matrix,
    artin_action,
    artin_is_trivial,
    b_commutator_dictionary,
    braids_equal,
    dictionary_relations,
    exponent_sum,
    matrix_product,
    tau,
)
from polybraid.errors import MixedDegrees, UnsupportedN, WordBlowup
from polybraid.permgroup import Permutation, closure, perm_group_analysis, strand_analysis


@st.composite
def braid_words(draw, n=None, max_len=20):
    n = n or draw(st.integers(2, 6))
    letters = draw(st.lists(st.integers(1, n - 1).flatmap(lambda i: st.sampled_from([i, -i])), max_size=max_len))
    return BraidWord(n, tuple(letters))


def cyc(n, *cycles):
    return Permutation.from_cycles(n, cycles)


class TestTauAndExponent:
    def test_tau_examples(self):
        assert tau(BraidWord(2, (1,))) == cyc(2, (1, 2))
        assert tau(BraidWord(2, (1, 1))).is_identity()
        assert tau(BraidWord(3, (1, 2))).cycle_type() == (3,)

    def test_tau_ignores_sign(self):
        assert tau(BraidWord(4, (1, -2, 3))) == tau(BraidWord(4, (-1, 2, -3)))

    def test_exponent_examples(self):
        assert exponent_sum(BraidWord(3, (1, 2))) == 2
        assert exponent_sum(BraidWord(3, (1, -2))) == 0
        assert exponent_sum(BraidWord(3, ())) == 0

    @settings(max_examples=100, deadline=None)
    @given(st.integers(2, 6).flatmap(lambda n: st.tuples(braid_words(n=n), braid_words(n=n))))
    def test_homomorphisms(self, pair):
        a, b = pair
        assert tau(a * b) == tau(a) * tau(b)
        assert exponent_sum(a * b) == exponent_sum(a) + exponent_sum(b)
        assert exponent_sum(a.inverse()) == -exponent_sum(a)


class TestWordProblem:
    def test_cancellation(self):
        assert artin_is_trivial(BraidWord(2, (1, -1)))

    def test_braid_relation(self):
        assert artin_is_trivial(BraidWord(3, (1, 2, 1, -2, -1, -2)))

    def test_generator_nontrivial(self):
        assert not artin_is_trivial(BraidWord(2, (1,)))

    def test_full_twist_central(self):
        delta2 = BraidWord(3, (1, 2) * 3)
        for g in (1, 2):
            s = BraidWord(3, (g,))
            assert braids_equal(delta2 * s, s * delta2)

    def test_pure_braid_nontrivial(self):
        assert not artin_is_trivial(BraidWord(3, (1, 1, 2, 2, -1, -1, -2, -2)))

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_relations_all_indices(self, n):
        for i in range(1, n):
            for j in range(i + 1, n):
                if j - i >= 2:
                    assert artin_is_trivial(BraidWord(n, (i, j, -i, -j)))
                    assert not artin_is_trivial(BraidWord(n, (i, j, -i)))
                else:
                    assert artin_is_trivial(BraidWord(n, (i, j, i, -j, -i, -j)))
                    assert not artin_is_trivial(BraidWord(n, (i, j, -i, -j)))

    @settings(max_examples=100, deadline=None)
    @given(braid_words(max_len=40))
    def test_inverse(self, b):
        assert artin_is_trivial(b * b.inverse())
        assert artin_is_trivial(b.inverse() * b)

    @settings(max_examples=60, deadline=None)
    @given(braid_words(max_len=12))
    def test_triviality_implies_pure_and_exponent_zero(self, b):
        if artin_is_trivial(b):
            assert tau(b).is_identity() and exponent_sum(b) == 0

    def test_budget(self):
        b = BraidWord(3, (1, -2) * 40)
        with pytest.raises(WordBlowup):
            artin_action(b, budget=100)

    def test_action_is_automorphism_of_generators(self):
        a = artin_action(BraidWord(3, (1,)))
        assert [list(w.letters) for w in a.images] == [[1, 2, -1], [1], [3]]


class TestDictionary:
    def test_n3(self):
        d = b_commutator_dictionary(3)
        assert set(d) == {"u", "v"}
        assert d["u"].letters == (2, -1) and d["v"].letters == (1, 2, -1, -1)
        assert all(exponent_sum(w) == 0 for w in d.values())

    def test_n4(self):
        d = b_commutator_dictionary(4)
        assert set(d) == {"u", "v", "a", "b"}
        assert all(exponent_sum(w) == 0 for w in d.values())
        assert tau(d["a"]) == cyc(4, (1, 2), (3, 4))
        assert tau(d["b"]) == cyc(4, (1, 3), (2, 4))

    def test_unsupported(self):
        with pytest.raises(UnsupportedN):
            b_commutator_dictionary(5)

    def test_eight_relations(self):
        rels = dictionary_relations()
        assert len(rels) == 8
        for _, lhs, rhs in rels:
            assert artin_is_trivial(lhs * rhs.inverse())

    def test_klein_no_common_fixed_point(self):
        rep = strand_analysis([cyc(4, (1, 2), (3, 4)), cyc(4, (1, 3), (2, 4))])
        assert not rep.pure and rep.common_fixed == frozenset()


class TestAlpha:
    def test_u(self):
        assert alpha_matrix("u") == ((0, -1), (1, 3))

    def test_v(self):
        assert alpha_matrix("v") == ((-1, -5), (1, 4))

    def test_cancel(self):
        assert alpha_matrix("uU") == ((1, 0), (0, 1))

    @settings(max_examples=40, deadline=None)
    @given(st.text(alphabet="uvUV", max_size=4), st.text(alphabet="uvUV", max_size=4))
    def test_multiplicative_unimodular(self, x, y):
        m = alpha_matrix(x + y)
        assert m == matrix_product([alpha_matrix(x), alpha_matrix(y)])
        (a, b), (c, d) = m
        assert a * d - b * c == 1


class TestPermGroups:
    def test_s3(self):
        r = perm_group_analysis([cyc(3, (1, 2)), cyc(3, (1, 2, 3))])
        assert (r.order, r.is_solvable, r.exponent) == (6, True, 6)

    def test_s4(self):
        r = perm_group_analysis([cyc(4, (1, 2)), cyc(4, (1, 2, 3, 4))])
        assert r.order == 24 and r.is_solvable
        assert r.derived_orders == (24, 12, 4, 1)

    def test_a5(self):
        r = perm_group_analysis([cyc(5, (1, 2, 3)), cyc(5, (1, 2, 3, 4, 5))])
        assert r.order == 60 and not r.is_solvable and r.is_perfect

    def test_strands(self):
        assert strand_analysis([Permutation.identity(3)]).common_fixed == frozenset({1, 2, 3})
        assert strand_analysis([cyc(2, (1, 2))]).common_fixed == frozenset()

    def test_mixed(self):
        with pytest.raises(MixedDegrees):
            strand_analysis([Permutation.identity(2), Permutation.identity(3)])

    @settings(max_examples=30, deadline=None)
    @given(st.permutations(range(1, 6)), st.permutations(range(1, 6)))
    def test_closure_order_divides_factorial(self, p, q):
        g = closure([Permutation(tuple(p)), Permutation(tuple(q))])
        assert 120 % len(g) == 0
