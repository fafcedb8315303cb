"""The twelve acceptance checks, each returning a pass flag plus the measured quantity."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .braid import BraidWord, artin_is_trivial, dictionary_relations, exponent_sum
from .examples import counterexample_deg4, counterexample_deg_n, dyadic_solenoid, universal_solenoid
from .family import (
    NoRoot,
    PolyFamily,
    ScalarLoopSamples,
    arc,
    circle,
    mth_root_on_loop,
    perturb_off_discriminant,
    snap_to_exact,
)
from .freegrp import free_basis_and_rank, schreier_kernel
from .permgroup import Permutation, perm_group_analysis
from .polycore import MonicPoly, cauchy_bound, discriminant, perturbation_constant, roots, star_action
from .progroup import (
    StageMorphism,
    decide_star_conditions,
    dual_m_divisible,
    pro_m_divisible_abelianized,
)
from .sl2z import U_REF, V_REF, derive_b4_matrices, free_pair_check, image_rank_sum, verify_uv_identities
from .tracking import Tracker, loop_braid, solvability_verdict


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d} {self.name}: {self.detail}"


def homogeneity(trials: int = 200, seed: int = 0) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        p = MonicPoly(tuple(rng.normal(size=n) + 1j * rng.normal(size=n)))
        mu = complex(rng.normal(), rng.normal())
        N = n * (n - 1)
        d0 = complex(discriminant(p))
        d1 = complex(discriminant(star_action(mu, p)))
        worst = max(worst, abs(d1 - mu**N * d0) / (abs(d0) * abs(mu) ** N))
    return worst <= 1e-9, f"max relative error {worst:.2e} over {trials} pairs (limit 1e-9)"


def cauchy(families: int = 100, seed: int = 1) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    violations = 0
    checked = 0
    for _ in range(families):
        n = int(rng.integers(2, 5))
        c0 = rng.normal(size=n) + 1j * rng.normal(size=n)
        c1 = 0.5 * (rng.normal(size=n) + 1j * rng.normal(size=n))
        F = PolyFamily.from_function(circle(24), n, lambda _e, t: c0 + c1 * np.exp(2j * np.pi * t))
        bound = cauchy_bound(F.sup_norm(), 0.0)
        traj = Tracker(F).trajectory("loop")
        mags = np.abs(traj.positions)
        violations += int(np.sum(mags > bound))
        checked += mags.size
    return violations == 0, f"{checked} tracked roots, {violations} outside 1 + M"


def perturbation_pipeline(tol: float = 1e-8, seed: int = 0) -> tuple[bool, str]:
    P = PolyFamily.constant(circle(16), [0.0, 0.0])  # z^2 everywhere
    res = perturb_off_discriminant(P, tol, rng_seed=seed)
    Q, d0 = res.family, res.deviation
    approx = {e.id: [roots(Q.poly(e.id, j)).roots[0] for j in range(e.steps + 1)] for e in Q.graph.edges}
    snapped = snap_to_exact(Q, approx)
    C = perturbation_constant(P.sup_norm(), 2)
    resid = max(abs(P.poly(eid, j)(z)) for eid, vals in snapped.items() for j, z in enumerate(vals))
    ok = d0 <= 1e-3 and resid <= C * d0
    return ok, f"delta0 {d0:.2e}, residual {resid:.2e} <= C*delta0 = {C * d0:.2e} (C = {C:g})"


def monodromy() -> tuple[bool, str]:
    notes = []
    ok = True
    for n in (2, 3, 4, 5):
        F = PolyFamily.from_function(
            circle(12 * n), n, lambda _e, t: [-np.exp(2j * np.pi * t)] + [0.0] * (n - 1)
        )
        mono = loop_braid(F, ["loop"])
        cyc = mono.permutation.cycle_type() == (n,)
        verdict = solvability_verdict(F, [["loop"]])
        tr = Tracker(F).trajectory("loop")
        resid = max(
            abs(F.poly("loop", j)(z)) for j, row in enumerate(tr.sample_positions()) for z in row
        )
        ok &= cyc and not verdict.exact_root_exists and not verdict.completely_solvable and resid <= 1e-8
        notes.append(f"n={n} {mono.permutation} res {resid:.0e}")
    F = PolyFamily.constant(circle(8), [-1.0, 0.0, 0.0])
    triv = solvability_verdict(F, [["loop"]])
    ident = triv.permutations[0].is_identity()
    ok &= ident and triv.completely_solvable and triv.exact_root_exists
    notes.append(f"trivial loop identity={ident}")
    return ok, "; ".join(notes)


def braid_relations(n: int) -> list[BraidWord]:
    out = []
    for i in range(1, n):
        for j in range(i + 1, n):
            if j - i >= 2:
                out.append(BraidWord(n, (i, j, -i, -j)))
            elif j == i + 1:
                out.append(BraidWord(n, (i, j, i, -j, -i, -j)))
    return out


def word_problem(samples: int = 500, seed: int = 2) -> tuple[bool, str]:
    rels = [r for n in range(2, 7) for r in braid_relations(n)]
    rel_ok = all(artin_is_trivial(r) for r in rels)
    rng = np.random.default_rng(seed)
    inv_ok = True
    for _ in range(samples):
        n = int(rng.integers(2, 7))
        k = int(rng.integers(0, 13))
        letters = tuple(int(rng.integers(1, n)) * int(rng.choice([-1, 1])) for _ in range(k))
        b = BraidWord(n, letters)
        inv_ok &= artin_is_trivial(b * b.inverse())
    return rel_ok and inv_ok, f"{len(rels)} relations trivial={rel_ok}; {samples} b*b^-1 trivial={inv_ok}"


def b4_matrices() -> tuple[bool, str]:
    U, V = derive_b4_matrices()
    exact = U.rows() == ((0, -1), (1, 3)) and V.rows() == ((-1, -5), (1, 4))
    rels = dictionary_relations()
    rel_ok = all(artin_is_trivial(lhs * rhs.inverse()) for _, lhs, rhs in rels)
    return exact and rel_ok, f"U={U.rows()} V={V.rows()}; {len(rels)} relations trivial={rel_ok}"


def sl2_identities() -> tuple[bool, str]:
    checks = verify_uv_identities()
    signs = [c.sign for c in checks]
    fp = free_pair_check(U_REF, V_REF, 10)
    rank = image_rank_sum(U_REF, V_REF)
    ok = signs == [-1, -1] and fp.free and fp.length == 10 and rank == 2
    return ok, f"signs {signs}; free up to length {fp.length} ({fp.words_checked} words); rank {rank}"


def solenoid_divisibility() -> tuple[bool, str]:
    dy = dyadic_solenoid()
    phi = StageMorphism.to_integers(1, [1])
    two = dual_m_divisible(dy, phi, 2).divisible
    three = dual_m_divisible(dy, phi, 3).divisible
    uni = universal_solenoid(12)
    all_m = all(pro_m_divisible_abelianized(uni, m) is True for m in range(1, 13))
    ok = two is True and three is False and all_m
    return ok, f"dyadic: 2-divisible={two}, 3-divisible={three}; universal depth 12 all m<=12: {all_m}"


def mth_roots(m_samples: int = 64) -> tuple[bool, str]:
    f2 = ScalarLoopSamples.from_function(lambda t: np.exp(4j * np.pi * t), m_samples)
    f1 = ScalarLoopSamples.from_function(lambda t: np.exp(2j * np.pi * t), m_samples)
    sq = mth_root_on_loop(f2, 2)
    cube = mth_root_on_loop(f2, 3)
    sq1 = mth_root_on_loop(f1, 2)
    resid = float(np.max(np.abs(sq.as_array() ** 2 - f2.as_array()))) if not isinstance(sq, NoRoot) else np.inf
    ok = resid <= 1e-9 and isinstance(cube, NoRoot) and isinstance(sq1, NoRoot)
    return ok, (
        f"square root residual {resid:.1e}; cube root {'none' if isinstance(cube, NoRoot) else 'found'}; "
        f"winding-1 square root {'none' if isinstance(sq1, NoRoot) else 'found'}"
    )


def counterexamples() -> tuple[bool, str]:
    P, phi = counterexample_deg_n(5)
    d = decide_star_conditions(P, phi)
    stable = stable_group_solvable(d)
    zero_ab = all(not np.any(P.abelianized(j)) for j in range(1, P.depth))
    ok5 = d.stable_order == 60 and not stable and d.star_n is False and zero_ab
    star4 = []
    expsum = True
    for depth in range(1, 6):
        S, psi = counterexample_deg4(depth)
        star4.append(decide_star_conditions(S, psi).star_n)
        expsum &= all(exponent_sum(b) == 0 for b in psi.images)
    ok4 = all(s is False for s in star4) and expsum
    return ok5 and ok4, (
        f"deg 5: order {d.stable_order}, solvable={stable}, star5={d.star_n}, zero abelianization={zero_ab}; "
        f"deg 4: star4 {star4}, exponent sums zero={expsum}"
    )


def stable_group_solvable(d) -> bool:
    return perm_group_analysis(list(d.stable_generators)).is_solvable


def schreier() -> tuple[bool, str]:
    gens = [Permutation.from_cycles(3, [(1, 2)]), Permutation.from_cycles(3, [(1, 2, 3)])]
    g = schreier_kernel(gens)
    fb = free_basis_and_rank(g)
    closed = all(g.read(w) == g.base for w in fb.basis)
    ok = g.n_vertices == 6 and fb.rank == 7 == 1 + 6 * (2 - 1) and len(fb.basis) == 7 and closed
    return ok, f"{g.n_vertices} vertices, rank {fb.rank}, basis words closed={closed}"


def stability(steps: int = 32, seed: int = 3) -> tuple[bool, str]:
    F = PolyFamily.from_function(arc(steps), 2, lambda _e, t: [-np.exp(1j * np.pi * t), 0.0])
    tr = Tracker(F).trajectory("arc").sample_positions()
    gaps = np.abs(tr[:, 0] - tr[:, 1])
    alpha = 0.5 * float(np.min(gaps))
    rng = np.random.default_rng(seed)
    ok = True
    for strand in range(2):
        exact = tr[:, strand]
        noisy = exact + 0.3 * alpha / 3 * np.exp(2j * np.pi * rng.random(len(exact)))
        snapped = snap_to_exact(F, {"arc": noisy})["arc"]
        picks = np.argmin(np.abs(tr - snapped[:, None]), axis=1)
        ok &= bool(np.all(picks == strand))
    return ok, f"alpha {alpha:.3f}, shift {0.3 * alpha / 3:.3f}; both strands recovered at all {steps + 1} samples: {ok}"


CRITERIA: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
    ("discriminant homogeneity", homogeneity),
    ("Cauchy bound", cauchy),
    ("perturbation constant", perturbation_pipeline),
    ("monodromy", monodromy),
    ("braid word problem", word_problem),
    ("B4' matrices", b4_matrices),
    ("SL2/PSL2 identities", sl2_identities),
    ("solenoid divisibility", solenoid_divisibility),
    ("mth roots", mth_roots),
    ("counterexamples", counterexamples),
    ("Schreier machinery", schreier),
    ("stability", stability),
]


def run_criterion(number: int) -> CriterionResult:
    name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crash is a failed criterion, reported as such
        passed, detail = False, f"error {type(exc).__name__}: {exc}"
    return CriterionResult(number, name, bool(passed), detail, time.perf_counter() - t0)


def run_all() -> list[CriterionResult]:
    return [run_criterion(k) for k in range(1, len(CRITERIA) + 1)]
