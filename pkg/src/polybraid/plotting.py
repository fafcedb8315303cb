"""Deterministic SVG figures: strand plots of root trajectories and braid diagrams."""

from __future__ import annotations

import io
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import LineCollection

from .braid import BraidWord
from .errors import EmptyInput

STYLE = {
    "svg.hashsalt": "polybraid",
    "svg.fonttype": "none",
    "font.size": 9,
    "axes.spines.top": False,
    "axes.spines.right": False,
}


def _to_svg(fig: plt.Figure) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)
    return buf.getvalue()


def strand_plot(params: np.ndarray, positions: np.ndarray, title: str = "") -> str:
    """Parameter against real part of each root; colour encodes the imaginary part."""
    params = np.asarray(params, dtype=float)
    positions = np.asarray(positions, dtype=complex)
    if positions.ndim != 2 or positions.size == 0 or len(params) < 2:
        raise EmptyInput("trajectory has no samples")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5.0, 3.5))
        vmax = max(float(np.max(np.abs(positions.imag))), 1e-12)
        norm = plt.Normalize(-vmax, vmax)
        lc = None
        for i in range(positions.shape[1]):
            z = positions[:, i]
            pts = np.column_stack([params, z.real])
            segs = np.stack([pts[:-1], pts[1:]], axis=1)
            lc = LineCollection(segs, cmap="coolwarm", norm=norm, linewidths=1.6)
            lc.set_array(0.5 * (z.imag[:-1] + z.imag[1:]))
            ax.add_collection(lc)
            ax.annotate(f"{i + 1}", (params[0], z[0].real), textcoords="offset points", xytext=(-10, 0), va="center")
        ax.set_xlim(params[0], params[-1])
        lo, hi = float(np.min(positions.real)), float(np.max(positions.real))
        pad = 0.08 * max(hi - lo, 1e-9)
        ax.set_ylim(lo - pad, hi + pad)
        ax.set_xlabel("parameter")
        ax.set_ylabel("Re z")
        fig.colorbar(lc, ax=ax, label="Im z")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return _to_svg(fig)


def braid_diagram(b: BraidWord, title: str = "") -> str:
    """Strands run left to right; sigma_i crosses strands i, i+1 with the over-strand drawn last."""
    n = b.strands
    if n < 1:
        raise EmptyInput("braid has no strands")
    k = len(b.letters)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(max(2.5, 0.6 * (k + 2)), 0.5 * n + 1.0))
        ts = np.linspace(0.0, 1.0, 25)
        s = 3 * ts**2 - 2 * ts**3
        for pos in range(1, n + 1):
            ax.plot([0, 0.5], [pos, pos], color="k", lw=1.5)
            ax.plot([k + 0.5, k + 1], [pos, pos], color="k", lw=1.5)
        for j, letter in enumerate(b.letters):
            i = abs(letter)
            x = j + 0.5 + ts
            for pos in range(1, n + 1):
                if pos not in (i, i + 1):
                    ax.plot([j + 0.5, j + 1.5], [pos, pos], color="k", lw=1.5)
            up = i + s  # strand moving from row i to row i + 1
            down = i + 1 - s
            under, over = (up, down) if letter > 0 else (down, up)
            ax.plot(x, under, color="k", lw=1.5)
            ax.plot(x, over, color="white", lw=6, solid_capstyle="butt")
            ax.plot(x, over, color="k", lw=1.5)
            ax.text(j + 1, n + 0.45, ("s" if letter > 0 else "S") + str(i), ha="center")
        ax.set_xlim(0, k + 1)
        ax.set_ylim(0.5, n + 0.8)
        ax.set_yticks(range(1, n + 1))
        ax.set_xticks([])
        ax.spines["bottom"].set_visible(False)
        ax.set_ylabel("position")
        if title:
            ax.set_title(title)
        fig.tight_layout()
        return _to_svg(fig)


def verdict_bar(labels: Sequence[str], passed: Sequence[bool]) -> str:
    """One bar per acceptance criterion, green when it passed."""
    if not labels:
        raise EmptyInput("no criteria")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.0, 0.3 * len(labels) + 1.0))
        y = np.arange(len(labels))[::-1]
        colors = ["#2a9d5c" if p else "#c0392b" for p in passed]
        ax.barh(y, [1] * len(labels), color=colors)
        ax.set_yticks(y)
        ax.set_yticklabels(labels)
        ax.set_xticks([])
        ax.set_title(f"{sum(passed)}/{len(passed)} criteria passed")
        fig.tight_layout()
        return _to_svg(fig)
