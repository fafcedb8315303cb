"""Generators for the named inverse systems: solenoids and the three counterexample families."""

from __future__ import annotations

from collections import deque
from itertools import product
from typing import Iterator

from .braid import BraidWord, b_commutator_dictionary, exponent_sum, tau
from .errors import BFSBudget, BudgetExhausted
from .freegrp import (
    FreeHom,
    FreeWord,
    abelianization_matrix,
    commutator,
    evaluate_perm_word,
    free_basis_and_rank,
    schreier_kernel,
)
from .permgroup import Permutation, closure
from .progroup import PeriodicTail, ProFreeGroup, StageMorphism
from .sl2z import U_REF, V_REF, IntMatrix2, image_rank_sum


def solenoid(multipliers: list[int], periodic: bool = False) -> ProFreeGroup:
    """Rank-1 stages with bonding j sending x to x^multipliers[j - 1]."""
    if not multipliers:
        raise ValueError("need at least one multiplier")
    if any(m < 1 for m in multipliers):
        raise ValueError("multipliers must be positive")
    bonds = tuple(FreeHom(1, 1, (FreeWord(1, (1,) * m),)) for m in multipliers)
    ext = PeriodicTail(len(multipliers)) if periodic else None
    return ProFreeGroup((1,) * (len(multipliers) + 1), bonds, ext, meta={"multipliers": list(multipliers)})


def universal_solenoid(k: int) -> ProFreeGroup:
    return solenoid(list(range(1, k + 1)))


def dyadic_solenoid() -> ProFreeGroup:
    return solenoid([2], periodic=True)


# ---------------------------------------------------------------- degree >= 5


def alternating_pair(n: int) -> tuple[Permutation, Permutation]:
    """(1 2 3) with (1 2 ... n) for odd n, or with (2 3 ... n) for even n."""
    a = Permutation.from_cycles(n, [(1, 2, 3)])
    cyc = tuple(range(1, n + 1)) if n % 2 else tuple(range(2, n + 1))
    return a, Permutation.from_cycles(n, [cyc])


def sigma_lift(p: Permutation) -> BraidWord:
    """A braid with strand permutation p and exponent sum 0 (p must be even).

    Bubble-sort p into adjacent transpositions and give them alternating signs.
    """
    imgs = list(p.images)
    swaps = []
    changed = True
    while changed:
        changed = False
        for i in range(len(imgs) - 1):
            if imgs[i] > imgs[i + 1]:
                imgs[i], imgs[i + 1] = imgs[i + 1], imgs[i]
                swaps.append(i + 1)
                changed = True
    if len(swaps) % 2:
        raise ValueError("odd permutations have no exponent-sum-zero lift")
    b = BraidWord(p.degree, tuple(s if k % 2 == 0 else -s for k, s in enumerate(swaps)))
    if tau(b) != p:
        raise AssertionError("lift has the wrong strand permutation")
    return b


def _cayley_words(gens: list[Permutation]) -> list[tuple[Permutation, tuple[int, ...]]]:
    """Each element of <gens> with a shortest word (letters 1, -1, 2, -2, ...), BFS order."""
    n = gens[0].degree
    e = Permutation.identity(n)
    letters = [s for i in range(1, len(gens) + 1) for s in (i, -i)]
    images = {i: gens[i - 1] for i in range(1, len(gens) + 1)}
    images.update({-i: gens[i - 1].inverse() for i in range(1, len(gens) + 1)})
    seen = {e: ()}
    order = [(e, ())]
    queue = deque([e])
    while queue:
        g = queue.popleft()
        for s in letters:
            h = g * images[s]
            if h not in seen:
                seen[h] = seen[g] + (s,)
                order.append((h, seen[h]))
                queue.append(h)
    return order


def commutator_preimage(
    gens: list[Permutation], target: Permutation, budget: int = 10**6
) -> FreeWord:
    """A single commutator [w1, w2] in F_r mapping onto ``target``."""
    elems = _cayley_words(gens)
    checked = 0
    for g, w1 in elems:
        ginv = g.inverse()
        for h, w2 in elems:
            checked += 1
            if checked > budget:
                raise BFSBudget(f"no commutator found within {budget} pairs")
            if g * h * ginv * h.inverse() == target:
                r = len(gens)
                return commutator(FreeWord(r, w1), FreeWord(r, w2))
    raise BFSBudget("target is not a single commutator in the image group")


def counterexample_deg_n(n: int, stages: int = 3, budget: int = 10**6) -> tuple[ProFreeGroup, StageMorphism]:
    """Constant system with bonding x -> x', y -> y' (commutators with the same image in A_n)."""
    if n < 5:
        raise ValueError("needs n >= 5")
    a, b = alternating_pair(n)
    order = len(closure([a, b]))
    if order != _factorial(n) // 2:
        raise AssertionError("pair does not generate the alternating group")
    xp = commutator_preimage([a, b], a, budget)
    yp = commutator_preimage([a, b], b, budget)
    f = FreeHom(2, 2, (xp, yp))
    for w, target in ((xp, a), (yp, b)):
        if evaluate_perm_word(w, [a, b]) != target:
            raise AssertionError("bonding does not preserve the map to A_n")
    if any(any(row) for row in abelianization_matrix(f)):
        raise AssertionError("bonding does not land in the commutator subgroup")
    lifts = [sigma_lift(a), sigma_lift(b)]
    if any(exponent_sum(w) for w in lifts):
        raise AssertionError("lift leaves the commutator subgroup of the braid group")
    depth = max(2, stages)
    system = ProFreeGroup(
        (2,) * depth,
        (f,) * (depth - 1),
        PeriodicTail(1),
        meta={
            "construction": "degree_n",
            "n": n,
            "pair": [str(a), str(b)],
            "x_image": list(xp.letters),
            "y_image": list(yp.letters),
            "lifts": [list(w.letters) for w in lifts],
        },
    )
    return system, StageMorphism.to_braids(1, n, lifts)


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# ---------------------------------------------------------------- degree 4


def deg4_bonding() -> FreeHom:
    """Carrier generators (A, B, U, V) = 1..4; U -> U V U^-1 V^-1, V -> U V^2 U^-1 V^-2."""
    return FreeHom.from_letters(4, [(1,), (2,), (3, 4, -3, -4), (3, 4, 4, -3, -4, -4)])


def counterexample_deg4(stages: int = 5) -> tuple[ProFreeGroup, StageMorphism]:
    if stages < 1:
        raise ValueError("stages must be positive")
    d = b_commutator_dictionary(4)
    imgs = [d["a"], d["b"], d["u"], d["v"]]
    depth = max(2, stages)
    system = ProFreeGroup(
        (4,) * depth,
        (deg4_bonding(),) * (depth - 1),
        PeriodicTail(1),
        meta={"construction": "degree_4", "generators": ["a", "b", "u", "v"]},
    )
    phi = StageMorphism.to_braids(1, 4, imgs)
    if any(exponent_sum(w) for w in imgs):
        raise AssertionError("generator images leave the commutator subgroup")
    klein = (Permutation.from_cycles(4, [(1, 2), (3, 4)]), Permutation.from_cycles(4, [(1, 3), (2, 4)]))
    if (tau(d["a"]), tau(d["b"])) != klein:
        raise AssertionError("a, b do not map onto the Klein four-group generators")
    return system, phi


def uv_matrices(stages: int) -> list[tuple[IntMatrix2, IntMatrix2]]:
    """(U_n, V_n) for n = 0 .. stages - 1 under the commutator recursion."""
    U, V = U_REF, V_REF
    out = [(U, V)]
    for _ in range(stages - 1):
        Ui, Vi = U.inverse(), V.inverse()
        U, V = U @ V @ Ui @ Vi, U @ V @ V @ Ui @ Vi @ Vi
        out.append((U, V))
    return out


def deg4_dual_ranks(stages: int) -> list[int]:
    """Rank of im(U_n - 1) + im(V_n - 1) per stage; 2 means every map Ab(T) -> Z dies."""
    return [image_rank_sum(U, V) for U, V in uv_matrices(stages)]


# ---------------------------------------------------------------- acyclic, non-abelian


def l_sequence(i: int) -> int:
    """1, 1, 2, 1, 2, 3, 1, 2, 3, 4, ... (1-based)."""
    if i < 1:
        raise ValueError("index starts at 1")
    block = 1
    while i > block:
        i -= block
        block += 1
    return i


def j_index(n: int) -> int:
    target = l_sequence(n)
    return sum(1 for i in range(1, n + 1) if l_sequence(i) == target)


def _braid_words(k: int, max_len: int) -> Iterator[tuple[int, ...]]:
    letters = [s for i in range(1, k) for s in (i, -i)]
    for length in range(max_len + 1):
        for w in product(letters, repeat=length):
            if all(x != -y for x, y in zip(w, w[1:])):
                yield w


def hom_enumeration(k_max: int, word_budget: int) -> list[tuple[int, tuple[int, ...], tuple[int, ...]]]:
    """Homomorphisms F_2 -> B_k as (k, image of x, image of y).

    Ordered by total word length, then k, then the words lexicographically.
    """
    out = []
    for k in range(2, k_max + 1):
        words = list(_braid_words(k, word_budget))
        for w1 in words:
            for w2 in words:
                out.append((k, w1, w2))
    out.sort(key=lambda t: (len(t[1]) + len(t[2]), t[0], t[1], t[2]))
    return out


def acyclic_nonabelian(depth: int, word_budget: int = 1, k_max: int = 3) -> ProFreeGroup:
    """Nested rank-2 subgroups G_1 > G_2 > ... with G_{n+1} inside G_n' and inside ker(tau o phi_{l_n, j_n}).

    Stage n + 1 is generated by [p, q] and [p, q^2], where p, q are the first
    two Schreier basis words of the kernel of the strand permutation map on G_n.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    homs = hom_enumeration(k_max, word_budget)
    bondings: list[FreeHom] = []
    steps = []

    def perms_at(stage: int, k: int, w1: tuple[int, ...], w2: tuple[int, ...]) -> list[Permutation]:
        perms = [tau(BraidWord(k, w1)), tau(BraidWord(k, w2))]
        ident = Permutation.identity(k)
        for j in range(stage, len(bondings) + 1):
            h = bondings[j - 1]
            perms = [evaluate_perm_word(w, perms) if w.letters else ident for w in h.images]
        return perms

    for n in range(1, depth + 1):
        ell, j = l_sequence(n), j_index(n)
        if j > len(homs):
            raise BudgetExhausted(f"enumeration has only {len(homs)} homomorphisms, step {n} needs number {j}")
        k, w1, w2 = homs[j - 1]
        psi = perms_at(ell, k, w1, w2)
        graph = schreier_kernel(psi)
        basis = free_basis_and_rank(graph)
        p, q = basis.basis[0], basis.basis[1]
        new = (commutator(p, q), commutator(p, q * q))
        bondings.append(FreeHom(2, 2, new))
        steps.append(
            {
                "step": n,
                "l": ell,
                "j": j,
                "k": k,
                "phi": [list(w1), list(w2)],
                "psi": [list(x.images) for x in psi],
                "kernel_index": graph.n_vertices,
                "kernel_rank": basis.rank,
                "p": list(p.letters),
                "q": list(q.letters),
            }
        )
    system = ProFreeGroup(
        (2,) * (depth + 1),
        tuple(bondings),
        None,
        meta={"construction": "acyclic_nonabelian", "word_budget": word_budget, "k_max": k_max, "steps": steps},
    )
    for h in system.bondings:
        if any(any(row) for row in abelianization_matrix(h)):
            raise AssertionError("bonding is not inside the commutator subgroup")
    return system


def killed_at(system: ProFreeGroup, stage: int, k: int, w1: tuple[int, ...], w2: tuple[int, ...]) -> int | None:
    """First stage at which tau o phi (phi defined at ``stage``) becomes trivial, if any."""
    perms = [tau(BraidWord(k, w1)), tau(BraidWord(k, w2))]
    ident = Permutation.identity(k)
    beta = stage
    while True:
        if all(p.is_identity() for p in perms):
            return beta
        if beta >= system.depth:
            return None
        h = system.bonding(beta)
        perms = [evaluate_perm_word(w, perms) if w.letters else ident for w in h.images]
        beta += 1
