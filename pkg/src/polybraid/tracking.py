"""Root continuation along edges and loops, braid extraction, and solvability verdicts.

Strands are indexed by the lexicographic (real, imaginary) order of the roots
at the basepoint.  A step between two parameter values is accepted when every
root moves by less than ``safety * gap / 2``, where ``gap`` is the smallest
root separation at the start of the step; otherwise the step is bisected in
coefficient space.

Braid words are read from the real-part order of the strands after rotating
the plane clockwise by a small angle.  A swap of the strands at positions k and
k + 1 is recorded as sigma_k when the strand moving right passes below the
other (smaller imaginary part), and as sigma_k^-1 otherwise.  With this choice
a counterclockwise exchange of two roots is sigma_1, and the exponent sum of a
loop equals the winding number of the discriminant along it.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .braid import BraidWord, tau
from .errors import DegenerateProjection, RepeatedRoot, StepTooCoarse
from .family import PolyFamily, ScalarLoopSamples
from .permgroup import Permutation, strand_analysis
from .polycore import MonicPoly, discriminant, has_repeated_root, pairwise_min_gap, roots, star_action

SAFETY = 0.4
MAX_DEPTH = 20
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

EdgeStep = tuple[str, int]
Loop = tuple[EdgeStep, ...]


def lex_order(zs: Sequence[complex]) -> list[int]:
    return sorted(range(len(zs)), key=lambda i: (zs[i].real, zs[i].imag))


@dataclass(frozen=True)
class StepCertificate:
    start: float
    end: float
    max_displacement: float
    gap: float


@dataclass(frozen=True)
class RootTrajectory:
    """Strand positions along one edge, forward direction.

    ``params`` are fractional sample indices (0 .. m) including refinement
    points; ``positions[k, i]`` is strand i at ``params[k]``.
    """

    edge: str
    params: np.ndarray = field(repr=False)
    positions: np.ndarray = field(repr=False)
    certificates: tuple[StepCertificate, ...] = field(repr=False)

    @property
    def strands(self) -> int:
        return self.positions.shape[1]

    def sample_positions(self) -> np.ndarray:
        """Rows at the integer sample indices."""
        idx = [k for k, s in enumerate(self.params) if float(s).is_integer()]
        return self.positions[idx]


def _roots_at(coeffs: np.ndarray, tol: float) -> np.ndarray:
    p = MonicPoly(tuple(complex(c) for c in coeffs))
    if has_repeated_root(p):
        raise RepeatedRoot(f"discriminant vanishes at coefficients {np.round(coeffs, 12).tolist()}")
    return np.asarray(roots(p, tol).roots)


def _match(z0: np.ndarray, z1: np.ndarray, safety: float) -> tuple[np.ndarray, float, float] | None:
    gap = pairwise_min_gap(z0)
    d = np.abs(z0[:, None] - z1[None, :])
    pick = np.argmin(d, axis=1)
    if len(set(pick.tolist())) != len(pick):
        return None
    disp = float(np.max(d[np.arange(len(z0)), pick]))
    limit = safety * 0.5 * gap if math.isfinite(gap) else math.inf
    if not disp < limit:
        return None
    return z1[pick], disp, gap


def track_edge(
    F: PolyFamily,
    edge: str,
    start: Sequence[complex] | None = None,
    safety: float = SAFETY,
    max_depth: int = MAX_DEPTH,
    tol: float = 1e-10,
) -> RootTrajectory:
    """Continue the roots along ``edge`` from its first end.

    ``start`` fixes the strand order at t = 0; by default it is lexicographic.
    """
    m = len(F.samples[edge]) - 1
    z = _roots_at(F.samples[edge][0], tol)
    if start is not None:
        got = _match(np.asarray(start, dtype=complex), z, safety)
        if got is None:
            raise ValueError("start positions do not match the roots at the edge start")
        z = got[0]
    else:
        z = z[lex_order(list(z))]
    params = [0.0]
    rows = [z]
    certs: list[StepCertificate] = []

    def advance(s0: float, s1: float, z0: np.ndarray, depth: int) -> np.ndarray:
        z1 = _roots_at(F.coeffs_at(edge, s1), tol)
        got = _match(z0, z1, safety)
        if got is not None:
            matched, disp, gap = got
            params.append(s1)
            rows.append(matched)
            certs.append(StepCertificate(s0, s1, disp, gap))
            return matched
        if depth >= max_depth:
            raise StepTooCoarse(f"edge {edge}: step {s0:.6g} -> {s1:.6g} still too coarse at depth {depth}")
        mid = 0.5 * (s0 + s1)
        zm = advance(s0, mid, z0, depth + 1)
        return advance(mid, s1, zm, depth + 1)

    for j in range(m):
        z = advance(float(j), float(j + 1), z, 0)
    return RootTrajectory(edge, np.array(params), np.array(rows), tuple(certs))


def edge_ends(F: PolyFamily, step: EdgeStep) -> tuple[str, str]:
    a, b = F.graph.edge(step[0]).ends
    return (a, b) if step[1] > 0 else (b, a)


def parse_loop(loop: Sequence) -> Loop:
    """Accept ("e", 1) pairs or strings "e" / "-e"."""
    out = []
    for item in loop:
        if isinstance(item, str):
            out.append((item[1:], -1) if item.startswith("-") else (item, 1))
        else:
            eid, sign = item
            out.append((str(eid), 1 if sign > 0 else -1))
    return tuple(out)


def check_loop(F: PolyFamily, loop: Loop) -> None:
    here = F.graph.basepoint
    for step in loop:
        a, b = edge_ends(F, step)
        if a != here:
            raise ValueError(f"loop breaks at edge {step[0]}: expected to start at {here}, edge starts at {a}")
        here = b
    if here != F.graph.basepoint:
        raise ValueError("loop does not return to the basepoint")


class Tracker:
    """Caches forward trajectories per edge for one family."""

    def __init__(self, F: PolyFamily, safety: float = SAFETY, max_depth: int = MAX_DEPTH):
        self.F = F
        self.safety = safety
        self.max_depth = max_depth
        self._cache: dict[str, RootTrajectory] = {}

    def trajectory(self, edge: str) -> RootTrajectory:
        if edge not in self._cache:
            self._cache[edge] = track_edge(self.F, edge, safety=self.safety, max_depth=self.max_depth)
        return self._cache[edge]

    def basepoint_roots(self) -> np.ndarray:
        z = _roots_at(self.F.vertex_coeffs(self.F.graph.basepoint), 1e-10)
        return z[lex_order(list(z))]

    def traverse(self, step: EdgeStep, current: np.ndarray) -> np.ndarray:
        """Rows of the edge traversal, columns aligned with ``current``."""
        traj = self.trajectory(step[0])
        rows = traj.positions if step[1] > 0 else traj.positions[::-1]
        d = np.abs(current[:, None] - rows[0][None, :])
        pick = np.argmin(d, axis=1)
        if len(set(pick.tolist())) != len(pick):
            raise ValueError(f"cannot align strands entering edge {step[0]}")
        return rows[:, pick]

    def loop_path(self, loop: Loop) -> np.ndarray:
        check_loop(self.F, loop)
        current = self.basepoint_roots()
        parts = [current[None, :]]
        for step in loop:
            rows = self.traverse(step, current)
            parts.append(rows[1:])
            current = rows[-1]
        return np.concatenate(parts, axis=0)


def _rotation_candidates(count: int = 24) -> list[float]:
    out = []
    for k in range(count):
        frac = (k * GOLDEN) % 1.0
        out.append(1e-2 * GOLDEN ** (k // 3) * (0.5 + frac))
    return out


def braid_from_path(path: np.ndarray, theta: float) -> BraidWord:
    """Read the braid of a piecewise-linear strand path after rotating by exp(-i theta)."""
    n = path.shape[1]
    rot = path * np.exp(-1j * theta)
    scale = max(1.0, float(np.max(np.abs(rot))))
    tiny = 1e-13 * scale
    x0 = rot[0].real
    order = sorted(range(n), key=lambda i: x0[i])
    if n > 1 and np.min(np.diff(np.sort(x0))) <= tiny:
        raise DegenerateProjection("basepoint roots share a projection")
    if order != lex_order(list(path[0])):
        raise DegenerateProjection("rotation changes the basepoint strand order")
    letters: list[int] = []
    for r in range(len(rot) - 1):
        a, b = rot[r], rot[r + 1]
        events = []
        for i in range(n):
            for j in range(i + 1, n):
                d0 = a[i].real - a[j].real
                d1 = b[i].real - b[j].real
                if abs(d1) <= tiny:
                    raise DegenerateProjection("strands share a projection at a path vertex")
                if (d0 > 0) != (d1 > 0):
                    t = d0 / (d0 - d1)
                    events.append((t, i, j))
        events.sort()
        for e1, e2 in zip(events, events[1:]):
            if e2[0] - e1[0] <= 1e-12 and {e1[1], e1[2]} & {e2[1], e2[2]}:
                raise DegenerateProjection("simultaneous crossings share a strand")
        for t, i, j in events:
            pi, pj = order.index(i), order.index(j)
            if abs(pi - pj) != 1:
                raise DegenerateProjection("crossing strands are not adjacent")
            k = min(pi, pj)
            left = order[k]
            right = order[k + 1]
            zl = a[left] + t * (b[left] - a[left])
            zr = a[right] + t * (b[right] - a[right])
            if abs(zl.imag - zr.imag) <= tiny:
                raise DegenerateProjection("strands meet at a crossing")
            letters.append(k + 1 if zl.imag < zr.imag else -(k + 1))
            order[k], order[k + 1] = right, left
        if order != sorted(range(n), key=lambda i: b[i].real):
            raise DegenerateProjection("crossing bookkeeping disagrees with the projection")
    return BraidWord(n, tuple(letters)).free_reduced() if n > 1 else BraidWord(n)


def path_permutation(path: np.ndarray) -> Permutation:
    """Strand i (basepoint order) ends at the basepoint root with index images[i - 1]."""
    start, end = path[0], path[-1]
    d = np.abs(end[:, None] - start[None, :])
    pick = np.argmin(d, axis=1)
    if len(set(pick.tolist())) != len(pick):
        raise ValueError("loop endpoints do not match the basepoint roots")
    return Permutation(tuple(int(k) + 1 for k in pick))


@dataclass(frozen=True)
class LoopMonodromy:
    loop: Loop
    braid: BraidWord
    permutation: Permutation
    rotation: float
    path: np.ndarray = field(repr=False, compare=False)


def loop_braid(F: PolyFamily, loop: Sequence, tracker: Tracker | None = None) -> LoopMonodromy:
    tracker = tracker or Tracker(F)
    lp = parse_loop(loop)
    path = tracker.loop_path(lp)
    perm = path_permutation(path)
    last: DegenerateProjection | None = None
    for theta in _rotation_candidates():
        try:
            b = braid_from_path(path, theta)
        except DegenerateProjection as exc:
            last = exc
            continue
        if tau(b) != perm:
            raise AssertionError("braid permutation disagrees with strand endpoints")
        return LoopMonodromy(lp, b, perm, theta, path)
    raise DegenerateProjection(f"no rotation resolved the projection: {last}")


@dataclass(frozen=True)
class SpanningTree:
    order: tuple[str, ...]
    parent_edge: Mapping[str, EdgeStep]
    paths: Mapping[str, Loop]
    tree_edges: frozenset[str]


def spanning_tree(F: PolyFamily) -> SpanningTree:
    """BFS tree from the basepoint, edges taken in declaration order."""
    g = F.graph
    base = g.basepoint
    paths: dict[str, Loop] = {base: ()}
    parent: dict[str, EdgeStep] = {}
    tree: set[str] = set()
    order = [base]
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for e in g.edges:
            for step in ((e.id, 1), (e.id, -1)):
                a, b = edge_ends(F, step)
                if a == v and b not in paths:
                    paths[b] = paths[v] + (step,)
                    parent[b] = step
                    tree.add(e.id)
                    order.append(b)
                    queue.append(b)
    return SpanningTree(tuple(order), parent, paths, frozenset(tree))


def _inverse_path(p: Loop) -> Loop:
    return tuple((eid, -s) for eid, s in reversed(p))


def auto_loops(F: PolyFamily) -> list[Loop]:
    """One loop per non-tree edge: tree path, the edge, tree path back."""
    st = spanning_tree(F)
    loops = []
    for e in F.graph.edges:
        if e.id in st.tree_edges:
            continue
        a, b = e.ends
        loops.append(st.paths[a] + ((e.id, 1),) + _inverse_path(st.paths[b]))
    return loops


@dataclass(frozen=True)
class SolvabilityVerdict:
    loops: tuple[Loop, ...]
    monodromy: tuple[LoopMonodromy, ...]
    permutations: tuple[Permutation, ...]
    exact_root_exists: bool
    completely_solvable: bool
    fixed_strands: frozenset[int]
    witness: Mapping[str, np.ndarray] | None = field(default=None, repr=False)
    witness_strand: int | None = None


def solvability_verdict(F: PolyFamily, loops: Sequence[Sequence] | None = None) -> SolvabilityVerdict:
    tracker = Tracker(F)
    lps = [parse_loop(L) for L in loops] if loops is not None else auto_loops(F)
    mono = [loop_braid(F, L, tracker) for L in lps]
    perms = [m.permutation for m in mono]
    report = strand_analysis(perms, degree=F.degree)
    witness = None
    strand = None
    if report.common_fixed:
        strand = min(report.common_fixed)
        witness = witness_section(F, tracker, strand)
    return SolvabilityVerdict(
        loops=tuple(lps),
        monodromy=tuple(mono),
        permutations=tuple(perms),
        exact_root_exists=bool(report.common_fixed),
        completely_solvable=report.pure,
        fixed_strands=report.common_fixed,
        witness=witness,
        witness_strand=strand,
    )


def witness_section(F: PolyFamily, tracker: Tracker, strand: int) -> dict[str, np.ndarray]:
    """Continuous root section through basepoint root ``strand`` (1-based), per edge sample."""
    st = spanning_tree(F)
    value = {F.graph.basepoint: tracker.basepoint_roots()[strand - 1]}
    for v in st.order[1:]:
        eid, sign = st.parent_edge[v]
        traj = tracker.trajectory(eid)
        rows = traj.positions if sign > 0 else traj.positions[::-1]
        col = int(np.argmin(np.abs(rows[0] - value[edge_ends(F, (eid, sign))[0]])))
        value[v] = rows[-1, col]
    out = {}
    for e in F.graph.edges:
        traj = tracker.trajectory(e.id)
        rows = traj.sample_positions()
        col = int(np.argmin(np.abs(rows[0] - value[e.ends[0]])))
        end = rows[-1, col]
        if abs(end - value[e.ends[1]]) > 1e-6 * max(1.0, abs(end)):
            raise AssertionError(f"section does not close up along edge {e.id}")
        out[e.id] = rows[:, col].copy()
    return out


@dataclass(frozen=True)
class Obstruction:
    exponent: int
    loops: tuple[Loop, ...]
    windings: tuple[int, ...]


def _disc_along_edge(F: PolyFamily, eid: str, max_depth: int = MAX_DEPTH) -> tuple[np.ndarray, np.ndarray]:
    """Discriminant at the samples of an edge, plus the total argument change per step.

    Steps whose argument change is not clearly below pi/2 are bisected.
    """
    m = len(F.samples[eid]) - 1

    def disc(s: float) -> complex:
        p = MonicPoly(tuple(complex(c) for c in F.coeffs_at(eid, s)))
        if has_repeated_root(p):
            raise RepeatedRoot(f"edge {eid}: discriminant vanishes near sample {s:.6g}")
        return complex(discriminant(p))

    def turn(s0: float, s1: float, d0: complex, d1: complex, depth: int) -> float:
        inc = float(np.angle(d1 / d0))
        if abs(inc) < np.pi / 4:
            return inc
        if depth >= max_depth:
            raise StepTooCoarse(f"edge {eid}: discriminant argument not resolved near {s0:.6g}")
        mid = 0.5 * (s0 + s1)
        dm = disc(mid)
        return turn(s0, mid, d0, dm, depth + 1) + turn(mid, s1, dm, d1, depth + 1)

    vals = np.array([disc(float(j)) for j in range(m + 1)])
    incs = np.array([turn(float(j), float(j + 1), vals[j], vals[j + 1], 0) for j in range(m)])
    return vals, incs


def discriminant_winding(F: PolyFamily, loop: Sequence) -> int:
    lp = parse_loop(loop)
    check_loop(F, lp)
    total = 0.0
    for eid, sign in lp:
        _, incs = _disc_along_edge(F, eid)
        total += sign * float(np.sum(incs))
    return int(round(total / (2 * np.pi)))


def loop_discriminant_samples(F: PolyFamily, loop: Sequence) -> ScalarLoopSamples:
    """Discriminant values along a loop at the edge samples."""
    lp = parse_loop(loop)
    check_loop(F, lp)
    vals: list[complex] = []
    for eid, sign in lp:
        d, _ = _disc_along_edge(F, eid)
        seq = list(d if sign > 0 else d[::-1])
        vals.extend(seq if not vals else seq[1:])
    return ScalarLoopSamples(tuple(vals))


def normalize_unit_discriminant(
    F: PolyFamily, loops: Sequence[Sequence] | None = None
) -> PolyFamily | Obstruction:
    """Rescale the roots by a continuous f with Delta(f * P) = 1, or report the winding obstruction."""
    n = F.degree
    N = n * (n - 1)
    lps = [parse_loop(L) for L in loops] if loops is not None else auto_loops(F)
    data = {e.id: _disc_along_edge(F, e.id) for e in F.graph.edges}
    if all(np.all(np.abs(v - 1) <= 1e-12) for v, _ in data.values()):
        return F
    windings = []
    for L in lps:
        check_loop(F, L)
        total = sum(sign * float(np.sum(data[eid][1])) for eid, sign in L)
        windings.append(int(round(total / (2 * np.pi))))
    bad = [(L, w) for L, w in zip(lps, windings) if w % N]
    if bad:
        return Obstruction(N, tuple(L for L, _ in bad), tuple(w for _, w in bad))
    st = spanning_tree(F)
    base = F.graph.basepoint
    base_disc = complex(discriminant(MonicPoly(tuple(complex(c) for c in F.vertex_coeffs(base)))))
    phase: dict[str, float] = {}
    phase[base] = float(np.angle(base_disc))
    for v in st.order[1:]:
        eid, sign = st.parent_edge[v]
        a = edge_ends(F, (eid, sign))[0]
        phase[v] = phase[a] + sign * float(np.sum(data[eid][1]))
    out = {}
    for e in F.graph.edges:
        vals, incs = data[e.id]
        theta = phase[e.ends[0]] + np.concatenate(([0.0], np.cumsum(incs)))
        f = np.abs(vals) ** (-1.0 / N) * np.exp(-1j * theta / N)
        rows = []
        for j, row in enumerate(F.samples[e.id]):
            p = star_action(complex(f[j]), MonicPoly(tuple(complex(c) for c in row)))
            rows.append(np.array(p.coeffs, dtype=complex))
        out[e.id] = np.array(rows)
    return PolyFamily(F.graph, n, out)
