from __future__ import annotations

import numpy as np
import pytest

from polybraid.braid import BraidWord
from polybraid.errors import EmptyInput
from polybraid.plotting import braid_diagram, strand_plot, verdict_bar


def trajectory():
    t = np.linspace(0, 1, 33)
    z = np.exp(1j * np.pi * t)
    return t, np.column_stack([z, -z])


class TestStrandPlot:
    def test_deterministic(self):
        t, pos = trajectory()
        a = strand_plot(t, pos, title="x")
        assert a == strand_plot(t, pos, title="x")
        assert a.lstrip().startswith("<?xml") and "<svg" in a

    def test_empty(self):
        with pytest.raises(EmptyInput):
            strand_plot(np.array([0.0]), np.zeros((1, 0)))

    def test_real_strands(self):
        t = np.linspace(0, 1, 5)
        svg = strand_plot(t, np.column_stack([t + 0j, t + 2 + 0j]))
        assert "<svg" in svg


class TestBraidDiagram:
    def test_deterministic(self):
        b = BraidWord(3, (1, -2, 1))
        assert braid_diagram(b) == braid_diagram(b)

    def test_labels(self):
        svg = braid_diagram(BraidWord(3, (1, -2)))
        assert "s1" in svg and "S2" in svg

    def test_empty_word(self):
        assert "<svg" in braid_diagram(BraidWord(2, ()))

    def test_sign_changes_picture(self):
        assert braid_diagram(BraidWord(2, (1,))) != braid_diagram(BraidWord(2, (-1,)))


class TestVerdictBar:
    def test_counts(self):
        svg = verdict_bar(["a", "b"], [True, False])
        assert "1/2 criteria passed" in svg

    def test_empty(self):
        with pytest.raises(EmptyInput):
            verdict_bar([], [])
