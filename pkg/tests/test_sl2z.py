from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polybraid.errors import EntryBlowup, NotUnimodular
from polybraid.sl2z import (
    IDENTITY,
    Q,
    S,
    T_MAT,
    U_REF,
    V_REF,
    IntMatrix2,
    PSLWord,
    all_reduced_words,
    derive_b4_matrices,
    evaluate_word,
    free_pair_check,
    image_rank_sum,
    psl_normal_form,
    reduce_free_product,
    verify_uv_identities,
)

sq_words = st.text(alphabet="SQq", max_size=30)


@st.composite
def sl2_matrices(draw):
    """Random products of T^k and S; these generate SL_2(Z)."""
    M = IDENTITY
    for k in draw(st.lists(st.integers(-4, 4), max_size=8)):
        M = M @ (T_MAT**k) @ S
    if draw(st.booleans()):
        M = -M
    return M


class TestMatrices:
    def test_orders(self):
        assert (S**2) == -IDENTITY and (S**4) == IDENTITY
        assert (Q**3) == -IDENTITY and (Q**6) == IDENTITY

    def test_t_is_qs_in_psl(self):
        assert (Q @ S).equal_in_psl(T_MAT)

    def test_inverse(self):
        assert U_REF @ U_REF.inverse() == IDENTITY

    def test_not_unimodular(self):
        with pytest.raises(NotUnimodular):
            IntMatrix2(2, 0, 0, 1).inverse()
        with pytest.raises(NotUnimodular):
            psl_normal_form(IntMatrix2(2, 0, 0, 1))
        with pytest.raises(NotUnimodular):
            free_pair_check(IntMatrix2(1, 1, 1, 1), S)

    def test_entry_guard(self):
        with pytest.raises(EntryBlowup):
            IntMatrix2(1 << 5000, 0, 0, 1)

    def test_letters(self):
        with pytest.raises(ValueError):
            PSLWord("SX")


class TestNormalForm:
    @pytest.mark.parametrize(
        "M, word",
        [
            (IDENTITY, ""),
            (-IDENTITY, ""),
            (S, "S"),
            (Q, "Q"),
            (T_MAT, "QS"),
            (U_REF, "SQSQSQS"),
            (V_REF, "SqSQSQSQSQS"),
        ],
    )
    def test_examples(self, M, word):
        assert psl_normal_form(M).letters == word

    @settings(max_examples=150, deadline=None)
    @given(sl2_matrices())
    def test_evaluates_back(self, M):
        w = psl_normal_form(M)
        assert w.is_normal()
        assert w.evaluate().equal_in_psl(M)
        assert (len(w) == 0) == M.is_pm_identity()

    @settings(max_examples=150, deadline=None)
    @given(sq_words)
    def test_unique(self, letters):
        # PSL_2(Z) is the free product Z/2 * Z/3, so the reduced word is the normal form
        assert psl_normal_form(evaluate_word(letters)).letters == reduce_free_product(letters)

    @settings(max_examples=100, deadline=None)
    @given(sl2_matrices(), sl2_matrices())
    def test_multiplicative(self, A, B):
        prod = psl_normal_form(A).letters + psl_normal_form(B).letters
        assert psl_normal_form(A @ B).letters == reduce_free_product(prod)

    def test_exponent_sums(self):
        assert PSLWord("SQSqS").exponent_sums() == (3, 0)


class TestFreePairs:
    def test_uv_free(self):
        v = free_pair_check(U_REF, V_REF, 10)
        assert v.free and v.relation is None
        # 4 * 3^(k-1) reduced words of each length k
        assert v.words_checked == sum(4 * 3 ** (k - 1) for k in range(1, 11))

    def test_t_t2_relation(self):
        v = free_pair_check(T_MAT, T_MAT @ T_MAT, 10)
        assert not v.free and v.relation == "AAb" and v.length == 3

    def test_s_s(self):
        v = free_pair_check(S, S)
        assert not v.free and v.length == 2

    def test_all_reduced_words(self):
        assert len(all_reduced_words(3)) == 36
        assert "Aa" not in all_reduced_words(2)

    @settings(max_examples=30, deadline=None)
    @given(sl2_matrices(), sl2_matrices())
    def test_relation_oracle(self, A, B):
        # independent oracle: evaluate every reduced word of length up to 4
        gens = {"A": A, "a": A.inverse(), "B": B, "b": B.inverse()}
        shortest = None
        for k in range(1, 5):
            for w in all_reduced_words(k):
                M = IDENTITY
                for ch in w:
                    M = M @ gens[ch]
                if M.is_pm_identity():
                    shortest = k
                    break
            if shortest:
                break
        v = free_pair_check(A, B, 4)
        assert v.free == (shortest is None)
        if shortest:
            assert v.length == shortest


class TestRanks:
    def test_values(self):
        assert image_rank_sum(U_REF, V_REF) == 2
        assert image_rank_sum(IDENTITY, IDENTITY) == 0
        assert image_rank_sum(T_MAT, T_MAT @ T_MAT) == 1

    @settings(max_examples=60, deadline=None)
    @given(sl2_matrices(), sl2_matrices())
    def test_rank_bounds(self, A, B):
        r = image_rank_sum(A, B)
        assert 0 <= r <= 2
        assert (r == 0) == (A == IDENTITY and B == IDENTITY)


class TestReference:
    def test_derived(self):
        assert derive_b4_matrices() == (U_REF, V_REF)

    def test_identities_hold_up_to_sign(self):
        checks = verify_uv_identities()
        assert [c.sign for c in checks] == [-1, -1]
        for c in checks:
            assert c.product == -c.target
