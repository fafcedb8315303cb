from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polybraid.braid import artin_is_trivial, exponent_sum, tau
from polybraid.errors import RepeatedRoot
from polybraid.family import PolyFamily, arc, circle, wedge_of_circles, winding_number
from polybraid.polycore import MonicPoly, discriminant, expand
from polybraid.tracking import (
    Obstruction,
    Tracker,
    auto_loops,
    discriminant_winding,
    loop_braid,
    loop_discriminant_samples,
    normalize_unit_discriminant,
    solvability_verdict,
    track_edge,
)


def root_of_unity_family(n, steps=None, k=1):
    """z^n - exp(2 pi i k t) around a circle."""
    steps = steps or 12 * n * max(1, abs(k))
    return PolyFamily.from_function(circle(steps), n, lambda _e, t: [-np.exp(2j * np.pi * k * t)] + [0.0] * (n - 1))


class TestTrackEdge:
    def test_constant(self):
        F = PolyFamily.constant(circle(4), [-1.0, 0.0])
        tr = track_edge(F, "loop")
        assert np.allclose(tr.sample_positions(), [[-1, 1]] * 5)

    def test_half_circle(self):
        m = 16
        F = PolyFamily.from_function(arc(m), 2, lambda _e, t: [-np.exp(1j * np.pi * t), 0.0])
        tr = track_edge(F, "arc")
        t = np.arange(m + 1) / m
        pos = tr.sample_positions()
        # strands start at -1 and 1 and follow -+exp(pi i t / 2)
        assert np.allclose(pos[:, 1], np.exp(0.5j * np.pi * t), atol=1e-10)
        assert np.allclose(pos[:, 0], -np.exp(0.5j * np.pi * t), atol=1e-10)
        for c in tr.certificates:
            assert c.max_displacement < 0.4 * 0.5 * c.gap

    def test_repeated_root(self):
        F = PolyFamily.from_function(arc(20), 2, lambda _e, t: [-(2 * t - 1), 0.0])
        with pytest.raises(RepeatedRoot):
            track_edge(F, "arc")

    def test_coarse_sampling_is_refined(self):
        F = root_of_unity_family(3, steps=3)
        tr = track_edge(F, "loop")
        assert len(tr.params) > 4
        for row, s in zip(tr.positions, tr.params):
            p = MonicPoly(tuple(complex(c) for c in F.coeffs_at("loop", float(s))))
            assert max(abs(p(z)) for z in row) <= 1e-8


class TestLoopBraid:
    def test_trivial_loop(self):
        F = PolyFamily.constant(circle(4), [-1.0, 0.0])
        m = loop_braid(F, ["loop"])
        assert m.braid.letters == () and m.permutation.is_identity()

    def test_square_root_loop(self):
        m = loop_braid(root_of_unity_family(2), ["loop"])
        assert m.braid.letters in ((1,), (-1,))
        assert m.permutation.images == (2, 1)

    def test_cube_root_loop(self):
        m = loop_braid(root_of_unity_family(3), ["loop"])
        assert m.permutation.cycle_type() == (3,)
        assert abs(exponent_sum(m.braid)) == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_n_cycle(self, n):
        m = loop_braid(root_of_unity_family(n), ["loop"])
        assert m.permutation.cycle_type() == (n,)
        assert tau(m.braid) == m.permutation

    def test_reverse_inverts(self):
        F = root_of_unity_family(3)
        fwd = loop_braid(F, ["loop"])
        back = loop_braid(F, ["-loop"])
        assert back.permutation == fwd.permutation.inverse()
        assert artin_is_trivial(fwd.braid * back.braid)

    def test_loop_times_reverse_trivial(self):
        F = root_of_unity_family(4)
        m = loop_braid(F, ["loop", "-loop"])
        assert artin_is_trivial(m.braid)

    @settings(max_examples=12, deadline=None)
    @given(st.integers(2, 4), st.integers(-2, 2))
    def test_exponent_sum_is_discriminant_winding(self, n, k):
        F = root_of_unity_family(n, k=k)
        m = loop_braid(F, ["loop"])
        assert exponent_sum(m.braid) == discriminant_winding(F, ["loop"])
        assert discriminant_winding(F, ["loop"]) == winding_number(loop_discriminant_samples(F, ["loop"]))

    def test_exponent_sum_moving_pair(self):
        # two roots make two full turns about each other (sigma_1^4) while a third stays put
        def fn(_e, t):
            r = 0.5 * np.exp(4j * np.pi * t)
            return expand([1 + r, 1 - r, -3.0])

        F = PolyFamily.from_function(circle(64), 3, fn)
        m = loop_braid(F, ["loop"])
        assert exponent_sum(m.braid) == discriminant_winding(F, ["loop"]) == 4
        assert m.permutation.is_identity()


class TestVerdict:
    def test_wedge_constant(self):
        F = PolyFamily.constant(wedge_of_circles(2, 4), [-1.0, 0.0])
        v = solvability_verdict(F)
        assert v.completely_solvable and v.exact_root_exists
        assert v.witness_strand == 1
        w = np.concatenate([v.witness[e] for e in v.witness])
        # strand 1 in lexicographic order is -1
        assert np.allclose(w, -1.0)

    def test_unsolvable_circle(self):
        v = solvability_verdict(root_of_unity_family(2))
        assert not v.exact_root_exists and not v.completely_solvable
        assert v.permutations[0].images == (2, 1)

    def test_partial(self):
        def fn(e, t):
            r = np.exp(1j * np.pi * t) if e == "c1" else 1.0
            return expand([r, -r, 5.0])

        F = PolyFamily.from_function(wedge_of_circles(2, 32), 3, fn)
        v = solvability_verdict(F)
        assert sorted(p.images for p in v.permutations) == [(1, 2, 3), (2, 1, 3)]
        assert v.exact_root_exists and not v.completely_solvable
        assert v.fixed_strands == frozenset({3}) and v.witness_strand == 3
        M = F.sup_norm()
        for eid, vals in v.witness.items():
            for j, z in enumerate(vals):
                assert abs(F.poly(eid, j)(z)) <= 1e-8 * (1 + M) ** 3
            assert np.allclose(vals, 5.0)

    def test_auto_loops_count(self):
        F = PolyFamily.constant(wedge_of_circles(3, 4), [-1.0, 0.0])
        assert len(auto_loops(F)) == 3


class TestNormalize:
    def test_constant_scaling(self):
        F = PolyFamily.constant(circle(4), [-4.0, 0.0])
        G = normalize_unit_discriminant(F)
        assert not isinstance(G, Obstruction)
        assert np.allclose(G.samples["loop"], [[-0.25, 0.0]] * 5)
        assert discriminant(G.poly("loop", 0)) == pytest.approx(1.0)

    def test_obstruction(self):
        r = normalize_unit_discriminant(root_of_unity_family(2))
        assert isinstance(r, Obstruction)
        assert r.exponent == 2 and r.windings == (1,)

    def test_already_normalized(self):
        F = PolyFamily.constant(circle(4), [-0.25, 0.0])
        assert normalize_unit_discriminant(F) is F

    def test_moving_normalized(self):
        # discriminant winds twice: divisible by n(n-1) = 2
        F = root_of_unity_family(2, k=2)
        G = normalize_unit_discriminant(F)
        assert not isinstance(G, Obstruction)
        for _, _, p in G.iter_polys():
            assert abs(discriminant(p) - 1) <= 1e-6

    def test_tracker_cache(self):
        F = root_of_unity_family(2)
        tr = Tracker(F)
        assert tr.trajectory("loop") is tr.trajectory("loop")
