"""Sampled polynomial families over finite graphs, plus scalar loop utilities.

A family assigns a monic polynomial to every sample point of every edge.  Edge
``e`` with ``m`` steps carries m + 1 coefficient vectors at t = j / m, running
from its first end to its second.  Between samples the coefficients are
interpolated linearly.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .errors import (
    BudgetExhausted,
    DegreeMismatch,
    InadequateSampling,
    MarginViolation,
    VertexMismatch,
)
from .polycore import MonicPoly, discriminant, pairwise_min_gap, roots

VERTEX_TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    id: str
    ends: tuple[str, str]
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError(f"edge {self.id} needs at least one step")


@dataclass(frozen=True)
class Graph1Complex:
    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]
    basepoint: str

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise KeyError(f"no edge {eid!r}")

    def is_connected(self) -> bool:
        if self.basepoint not in self.vertices:
            return False
        adj: dict[str, set[str]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = e.ends
            adj[a].add(b)
            adj[b].add(a)
        seen = {self.basepoint}
        queue = deque([self.basepoint])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.vertices)

    def problems(self) -> list[str]:
        out = []
        if not self.edges:
            out.append("graph has no edges")
        if self.basepoint not in self.vertices:
            out.append(f"basepoint {self.basepoint!r} is not a vertex")
        for e in self.edges:
            for v in e.ends:
                if v not in self.vertices:
                    out.append(f"edge {e.id} ends at undeclared vertex {v!r}")
        if len({e.id for e in self.edges}) != len(self.edges):
            out.append("duplicate edge ids")
        if not out and not self.is_connected():
            out.append("graph is disconnected")
        return out

    def betti_number(self) -> int:
        return len(self.edges) - len(self.vertices) + 1


def circle(steps: int, name: str = "loop") -> Graph1Complex:
    return Graph1Complex(("v0",), (Edge(name, ("v0", "v0"), steps),), "v0")


def wedge_of_circles(k: int, steps: int) -> Graph1Complex:
    return Graph1Complex(("v0",), tuple(Edge(f"c{i}", ("v0", "v0"), steps) for i in range(1, k + 1)), "v0")


def arc(steps: int, name: str = "arc") -> Graph1Complex:
    return Graph1Complex(("v0", "v1"), (Edge(name, ("v0", "v1"), steps),), "v0")


@dataclass(frozen=True)
class PolyFamily:
    graph: Graph1Complex
    degree: int
    samples: Mapping[str, np.ndarray] = field(repr=False)

    def __post_init__(self):
        fixed = {k: np.asarray(v, dtype=complex) for k, v in self.samples.items()}
        for arr in fixed.values():
            arr.setflags(write=False)
        object.__setattr__(self, "samples", fixed)

    @classmethod
    def from_function(
        cls, graph: Graph1Complex, degree: int, fn: Callable[[str, float], Sequence[complex]]
    ) -> "PolyFamily":
        """Sample ``fn(edge_id, t) -> (a_0, ..., a_{n-1})`` at t = j / m."""
        samples = {}
        for e in graph.edges:
            ts = np.arange(e.steps + 1) / e.steps
            samples[e.id] = np.array([np.asarray(fn(e.id, float(t)), dtype=complex) for t in ts])
        return cls(graph, degree, samples)

    @classmethod
    def constant(cls, graph: Graph1Complex, coeffs: Sequence[complex]) -> "PolyFamily":
        c = np.asarray(coeffs, dtype=complex)
        return cls.from_function(graph, len(c), lambda _e, _t: c)

    def poly(self, eid: str, j: int) -> MonicPoly:
        return MonicPoly(tuple(complex(c) for c in self.samples[eid][j]))

    def coeffs_at(self, eid: str, s: float) -> np.ndarray:
        """Linear interpolation at fractional sample index ``s`` in [0, m]."""
        arr = self.samples[eid]
        j = min(int(math.floor(s)), len(arr) - 2)
        frac = s - j
        return (1 - frac) * arr[j] + frac * arr[j + 1]

    def iter_polys(self) -> Iterator[tuple[str, int, MonicPoly]]:
        for e in self.graph.edges:
            for j in range(len(self.samples[e.id])):
                yield e.id, j, self.poly(e.id, j)

    def sup_norm(self) -> float:
        return float(max(np.max(np.abs(a)) for a in self.samples.values()))

    def vertex_coeffs(self, vertex: str) -> np.ndarray:
        for e in self.graph.edges:
            if e.ends[0] == vertex:
                return self.samples[e.id][0]
            if e.ends[1] == vertex:
                return self.samples[e.id][-1]
        raise KeyError(f"vertex {vertex!r} touches no edge")

    def shifted(self, c: Sequence[complex]) -> "PolyFamily":
        c = np.asarray(c, dtype=complex)
        return PolyFamily(self.graph, self.degree, {k: v + c for k, v in self.samples.items()})

    def mapped(self, fn: Callable[[str, int, np.ndarray], np.ndarray]) -> "PolyFamily":
        out = {}
        for k, v in self.samples.items():
            out[k] = np.array([fn(k, j, row) for j, row in enumerate(v)])
        return PolyFamily(self.graph, self.degree, out)


def family_distance(F: PolyFamily, G: PolyFamily) -> float:
    """Largest coefficient deviation over all samples."""
    return float(max(np.max(np.abs(F.samples[k] - G.samples[k])) for k in F.samples))


@dataclass(frozen=True)
class FamilyReport:
    valid: bool
    sup_norm: float
    problems: tuple[str, ...] = ()


def validate_family(F: PolyFamily, vertex_tol: float = VERTEX_TOL) -> FamilyReport:
    problems = list(F.graph.problems())
    for e in F.graph.edges:
        arr = F.samples.get(e.id)
        if arr is None:
            problems.append(f"edge {e.id} has no samples")
            continue
        if arr.ndim != 2 or arr.shape[1] != F.degree:
            raise DegreeMismatch(f"edge {e.id} samples have shape {arr.shape}, expected (*, {F.degree})")
        if arr.shape[0] != e.steps + 1:
            problems.append(f"edge {e.id} has {arr.shape[0]} samples, expected {e.steps + 1}")
        if not np.all(np.isfinite(arr)):
            problems.append(f"edge {e.id} has non-finite coefficients")
    if problems:
        return FamilyReport(False, F.sup_norm() if F.samples else 0.0, tuple(problems))
    at_vertex: dict[str, list[tuple[str, np.ndarray]]] = {}
    for e in F.graph.edges:
        at_vertex.setdefault(e.ends[0], []).append((e.id, F.samples[e.id][0]))
        at_vertex.setdefault(e.ends[1], []).append((e.id, F.samples[e.id][-1]))
    for v, ends in at_vertex.items():
        ref_id, ref = ends[0]
        bad = [eid for eid, c in ends[1:] if np.max(np.abs(c - ref)) > vertex_tol]
        if bad:
            raise VertexMismatch(f"coefficients disagree at vertex {v}", edges=tuple([ref_id] + bad))
    return FamilyReport(True, F.sup_norm())


def _grid_pitch(delta: float) -> float:
    # largest power of two not above delta / 4, so grids for different deltas nest
    return 2.0 ** math.floor(math.log2(delta / 4))


MAX_GRID_POINTS = 2_000_000


def stability_margin(F: PolyFamily, delta: float) -> float:
    """min(1, min |P(x, w)|) over grid points w in |w| <= 2 + M at distance >= delta from the roots.

    When the grid would be too fine the bound delta^n is returned instead; it is
    a lower bound for |P(x, w)| on the same set, since |P(w)| = prod |w - root|.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    R = 2.0 + F.sup_norm()
    h = _grid_pitch(delta)
    k = int(math.floor(R / h))
    if (2 * k + 1) ** 2 > MAX_GRID_POINTS:
        return min(1.0, delta ** F.degree)
    axis = h * np.arange(-k, k + 1)
    grid = (axis[:, None] + 1j * axis[None, :]).ravel()
    grid = grid[np.abs(grid) <= R]
    best = 1.0
    for _, _, p in F.iter_polys():
        rs = np.asarray(roots(p).roots)
        dist = np.min(np.abs(grid[:, None] - rs[None, :]), axis=1)
        ys = grid[dist >= delta]
        if ys.size:
            best = min(best, float(np.min(np.abs(p(ys)))))
    return best


def min_abs_discriminant(F: PolyFamily) -> float:
    return float(min(abs(discriminant(p)) for _, _, p in F.iter_polys()))


@dataclass(frozen=True)
class PerturbResult:
    family: PolyFamily
    deviation: float
    attempts: int
    min_discriminant: float


def perturb_off_discriminant(F: PolyFamily, tol: float, budget: int = 40, rng_seed: int = 0) -> PerturbResult:
    """Shift all coefficients by one random constant so that |Delta| >= tol at every sample.

    The shift is drawn uniformly from the polydisk of radius tol * 2^k on attempt k.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    current = min_abs_discriminant(F)
    if current >= tol:
        return PerturbResult(F, 0.0, 0, current)
    n = F.degree
    for attempt in range(budget):
        r = tol * 2.0**attempt
        rng = np.random.default_rng([rng_seed, attempt])
        c = r * np.sqrt(rng.random(n)) * np.exp(2j * np.pi * rng.random(n))
        Q = F.shifted(c)
        md = min_abs_discriminant(Q)
        if md >= tol:
            return PerturbResult(Q, float(np.max(np.abs(c))), attempt + 1, md)
    raise BudgetExhausted(f"no shift cleared the discriminant after {budget} attempts")


def snap_to_exact(
    F: PolyFamily, approx: Mapping[str, Sequence[complex]], eps: float | None = None
) -> dict[str, np.ndarray]:
    """Replace an eps-approximate root sample by the exact root it is close to.

    With alpha half the smallest root gap over all samples, each approximate
    value must lie within alpha / 3 of exactly one root, and consecutive snapped
    values must stay within alpha of each other.
    """
    per_sample_roots = {}
    gap = math.inf
    for eid, j, p in F.iter_polys():
        rs = np.asarray(roots(p).roots)
        per_sample_roots[(eid, j)] = rs
        gap = min(gap, pairwise_min_gap(rs))
    if not gap > 0:
        raise MarginViolation("family has a repeated root")
    alpha = 0.5 * gap if math.isfinite(gap) else 1.0
    if eps is None:
        eps = stability_margin(F, alpha / 3)
    out = {}
    for e in F.graph.edges:
        vals = np.asarray(approx[e.id], dtype=complex)
        if len(vals) != len(F.samples[e.id]):
            raise ValueError(f"edge {e.id}: {len(vals)} approximate values for {len(F.samples[e.id])} samples")
        snapped = np.empty_like(vals)
        for j, w in enumerate(vals):
            p = F.poly(e.id, j)
            resid = abs(p(w))
            if not resid < eps:
                raise MarginViolation(f"edge {e.id} sample {j}: residual {resid:.3g} is not below eps {eps:.3g}")
            rs = per_sample_roots[(e.id, j)]
            d = np.abs(rs - w)
            k = int(np.argmin(d))
            if not d[k] < alpha / 3:
                raise MarginViolation(f"edge {e.id} sample {j}: nearest root is {d[k]:.3g} away, margin {alpha / 3:.3g}")
            snapped[j] = rs[k]
            if j and not abs(snapped[j] - snapped[j - 1]) < alpha:
                raise MarginViolation(f"edge {e.id} sample {j}: snapped root jumped by {abs(snapped[j] - snapped[j - 1]):.3g}")
        out[e.id] = snapped
    return out


@dataclass(frozen=True)
class ScalarLoopSamples:
    values: tuple[complex, ...]

    def __post_init__(self):
        vals = tuple(complex(v) for v in self.values)
        if len(vals) < 2:
            raise ValueError("a loop needs at least two samples")
        if any(v == 0 for v in vals):
            raise ValueError("loop samples must be nonzero")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, fn: Callable[[float], complex], m: int) -> "ScalarLoopSamples":
        return cls(tuple(complex(fn(j / m)) for j in range(m + 1)))

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=complex)

    def concat(self, other: "ScalarLoopSamples") -> "ScalarLoopSamples":
        return ScalarLoopSamples(self.values + other.values[1:])

    def reversed(self) -> "ScalarLoopSamples":
        return ScalarLoopSamples(self.values[::-1])


@dataclass(frozen=True)
class NoRoot:
    winding: int
    m: int

    @property
    def reason(self) -> str:
        return f"{self.m} does not divide winding number {self.winding}"


def _increments(f: ScalarLoopSamples) -> np.ndarray:
    v = f.as_array()
    inc = np.angle(v[1:] / v[:-1])
    if np.any(np.abs(inc) >= np.pi / 2):
        j = int(np.argmax(np.abs(inc)))
        raise InadequateSampling(f"argument jumps by {inc[j]:.3f} between samples {j} and {j + 1}")
    return inc


def winding_number(f: ScalarLoopSamples) -> int:
    total = float(np.sum(_increments(f))) / (2 * np.pi)
    w = round(total)
    if abs(total - w) > 1e-6:
        raise InadequateSampling(f"loop is not closed: total turning {total:.6f}")
    return int(w)


def mth_root_on_loop(f: ScalarLoopSamples, m: int) -> ScalarLoopSamples | NoRoot:
    if m < 1:
        raise ValueError("m must be positive")
    w = winding_number(f)
    if m == 1:
        return f
    if w % m:
        return NoRoot(w, m)
    v = f.as_array()
    theta = np.angle(v[0]) + np.concatenate(([0.0], np.cumsum(_increments(f))))
    g = np.abs(v) ** (1.0 / m) * np.exp(1j * theta / m)
    return ScalarLoopSamples(tuple(g))
