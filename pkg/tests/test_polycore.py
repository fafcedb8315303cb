from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polybraid.errors import DegreeTooSmall, EmptyMultiset, NonConvergence, ZeroScalar
from polybraid.polycore import (
    MonicPoly,
    RootMultiset,
    cauchy_bound,
    discriminant,
    discriminant_from_roots,
    expand,
    has_repeated_root,
    min_root_gap,
    multiset_distance,
    perturbation_constant,
    roots,
    star_action,
)


def sorted_roots(p, tol=1e-9):
    return sorted(roots(p, tol).roots, key=lambda z: (round(z.real, 6), round(z.imag, 6)))


def oracle_roots(p):
    """numpy's companion-matrix eigenvalues, an independent root finder."""
    return np.roots(p.full_coeffs())


complexes = st.complex_numbers(max_magnitude=3.0, allow_nan=False, allow_infinity=False)


class TestRoots:
    def test_z2_minus_1(self):
        r = sorted_roots(MonicPoly((-1, 0)))
        assert np.allclose(r, [-1, 1], atol=1e-12)

    def test_z2_plus_1(self):
        r = sorted_roots(MonicPoly((1, 0)))
        assert np.allclose(sorted(r, key=lambda z: z.imag), [-1j, 1j], atol=1e-12)

    def test_triple_root(self):
        r = roots(MonicPoly((-1, 3, -3)))
        assert np.allclose(r.roots, [1, 1, 1], atol=1e-6)

    def test_quadruple_root(self):
        p = MonicPoly.from_roots([2, 2, 2, 2])
        assert np.allclose(roots(p).roots, [2] * 4, atol=1e-5)

    def test_expansion_within_tolerance(self):
        p = MonicPoly((2 - 1j, 0.5, -3, 1j, 4))
        rs = roots(p, tol=1e-10)
        assert np.max(np.abs(expand(rs.roots) - p.as_array())) <= 1e-10 * max(1, p.norm())

    def test_deterministic(self):
        p = MonicPoly((0.3, -1.2, 0.7j))
        assert roots(p).roots == roots(p).roots

    def test_budget_exhaustion(self):
        with pytest.raises(NonConvergence):
            roots(MonicPoly((1.0, 2.0, 3.0, 4.0, 5.0)), tol=1e-300, max_iter=1)

    def test_degree_one(self):
        assert roots(MonicPoly((-5,))).roots == pytest.approx([5])

    def test_matches_numpy_oracle(self):
        rng = np.random.default_rng(7)
        for n in range(2, 9):
            p = MonicPoly(tuple(rng.normal(size=n) + 1j * rng.normal(size=n)))
            ours = np.sort_complex(np.asarray(roots(p).roots))
            theirs = np.sort_complex(oracle_roots(p))
            assert np.allclose(ours, theirs, atol=1e-7)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(complexes, min_size=1, max_size=8))
    def test_round_trip(self, coeffs):
        p = MonicPoly(tuple(coeffs))
        rs = roots(p, tol=1e-8)
        assert np.max(np.abs(expand(rs.roots) - p.as_array())) <= 1e-8 * max(1.0, p.norm())


class TestDiscriminant:
    def test_quadratic(self):
        assert discriminant(MonicPoly((-1, 0))) == 4

    def test_quadratic_formula(self):
        a1, a0 = 3, 5
        assert discriminant(MonicPoly((a0, a1))) == a1**2 - 4 * a0

    def test_depressed_cubic(self):
        # z^3 - z: oracle is the product of squared root differences
        p = MonicPoly((0, -1, 0))
        assert discriminant(p) == 4
        assert discriminant_from_roots(oracle_roots(p)) == pytest.approx(4)

    def test_repeated_root_is_zero(self):
        assert discriminant(MonicPoly((1, -2))) == 0
        assert has_repeated_root(MonicPoly((1.0, -2.0)))

    def test_exact_rational(self):
        p = MonicPoly((Fraction(1, 3), Fraction(0)))
        d = discriminant(p)
        assert isinstance(d, Fraction) and d == Fraction(-4, 3)
        assert discriminant(MonicPoly((Fraction(1, 4), 0))) == -1

    def test_degree_too_small(self):
        with pytest.raises(DegreeTooSmall):
            discriminant(MonicPoly((3,)))

    def test_known_quartic(self):
        # z^4 + z + 1: discriminant of z^4 + pz + q is -27p^4 + 256q^3
        assert discriminant(MonicPoly((1, 1, 0, 0))) == -27 + 256

    def test_against_root_product(self):
        rng = np.random.default_rng(11)
        for n in range(2, 7):
            for _ in range(10):
                p = MonicPoly(tuple(rng.normal(size=n) + 1j * rng.normal(size=n)))
                d = complex(discriminant(p))
                o = discriminant_from_roots(oracle_roots(p))
                assert abs(d - o) <= 1e-6 * abs(o)

    @settings(max_examples=80, deadline=None)
    @given(st.lists(complexes, min_size=2, max_size=6), complexes.filter(lambda z: abs(z) > 0.1))
    def test_homogeneity(self, coeffs, mu):
        p = MonicPoly(tuple(coeffs))
        n = p.degree
        d0 = complex(discriminant(p))
        if abs(d0) < 1e-6:
            return
        d1 = complex(discriminant(star_action(mu, p)))
        scale = abs(mu) ** (n * (n - 1))
        assert abs(d1 - mu ** (n * (n - 1)) * d0) <= 1e-9 * abs(d0) * scale


class TestStarAction:
    def test_scale_by_two(self):
        assert star_action(2, MonicPoly((-1, 0))).coeffs == (-4, 0)

    def test_identity(self):
        p = MonicPoly((1.5, -2j, 3))
        assert star_action(1, p).coeffs == p.coeffs

    def test_rotation(self):
        q = star_action(1j, MonicPoly((-1.0, 0.0)))
        assert np.allclose(q.as_array(), [1, 0])

    def test_zero(self):
        with pytest.raises(ZeroScalar):
            star_action(0, MonicPoly((1, 1)))

    def test_exact_stays_exact(self):
        q = star_action(Fraction(1, 2), MonicPoly((4, 2)))
        assert q.coeffs == (1, 1) and q.is_exact

    @settings(max_examples=50, deadline=None)
    @given(st.lists(complexes, min_size=1, max_size=5), complexes.filter(lambda z: abs(z) > 0.1),
           complexes.filter(lambda z: abs(z) > 0.1))
    def test_composition(self, coeffs, m1, m2):
        p = MonicPoly(tuple(coeffs))
        a = star_action(m2, star_action(m1, p)).as_array()
        b = star_action(m1 * m2, p).as_array()
        assert np.allclose(a, b, rtol=1e-12, atol=1e-12 * max(1, np.max(np.abs(b))))

    def test_roots_scale(self):
        p = MonicPoly((2, -1, 0.5j))
        mu = 1.5 - 0.5j
        a = np.sort_complex(np.asarray(roots(star_action(mu, p)).roots))
        b = np.sort_complex(mu * np.asarray(roots(p).roots))
        assert np.allclose(a, b, atol=1e-9)


class TestBounds:
    @pytest.mark.parametrize("M,eps,want", [(1, 0.5, 2.5), (0, 0, 1), (3, 1, 5)])
    def test_cauchy(self, M, eps, want):
        assert cauchy_bound(M, eps) == want

    @pytest.mark.parametrize("M,n,want", [(0, 2, 4), (0, 1, 2), (1, 3, 14)])
    def test_perturbation_constant(self, M, n, want):
        assert perturbation_constant(M, n) == pytest.approx(want)

    @settings(max_examples=60, deadline=None)
    @given(st.lists(complexes, min_size=1, max_size=7))
    def test_roots_inside_cauchy_bound(self, coeffs):
        p = MonicPoly(tuple(coeffs))
        bound = cauchy_bound(p.norm(), 0.0)
        assert all(abs(z) <= bound + 1e-9 for z in roots(p).roots)


class TestDistances:
    def test_multiset_distance(self):
        assert multiset_distance(0, RootMultiset((1, -1), 0)) == 1
        assert multiset_distance(1, RootMultiset((1, 1), 0)) == 0
        assert multiset_distance(3 + 4j, RootMultiset((0,), 0)) == 5

    def test_empty(self):
        with pytest.raises(EmptyMultiset):
            multiset_distance(0, RootMultiset((), 0))

    def test_min_root_gap(self):
        assert min_root_gap(MonicPoly((-1, 0))) == pytest.approx(2)
        assert min_root_gap(MonicPoly((1, -2))) == 0
        assert min_root_gap(MonicPoly((0, -1, 0))) == pytest.approx(1)

    def test_min_root_gap_degree(self):
        with pytest.raises(DegreeTooSmall):
            min_root_gap(MonicPoly((1,)))
