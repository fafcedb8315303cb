"""Finite truncations of inverse sequences of free groups.

Stage indices start at 1.  Bonding j maps stage j + 1 to stage j.  An optional
periodic tail of period p means the last p bondings repeat forever, which makes
the eventual behaviour of residues and permutation images exactly decidable by
cycle detection.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .braid import BraidWord, tau
from .errors import IndexOutOfRange, RankMismatch, TargetMismatch
from .freegrp import FreeHom, FreeWord, abelianization_matrix, evaluate_perm_word, identity_matrix
from .permgroup import Permutation, closure


@dataclass(frozen=True)
class PeriodicTail:
    period: int

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be positive")


@dataclass(frozen=True)
class ProFreeGroup:
    ranks: tuple[int, ...]
    bondings: tuple[FreeHom, ...]
    extension: PeriodicTail | None = None
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ranks = tuple(int(r) for r in self.ranks)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "bondings", tuple(self.bondings))
        if not ranks:
            raise ValueError("need at least one stage")
        if len(self.bondings) != len(ranks) - 1:
            raise RankMismatch(f"{len(ranks)} stages need {len(ranks) - 1} bondings, got {len(self.bondings)}")
        for j, h in enumerate(self.bondings, start=1):
            if h.codomain_rank != ranks[j - 1] or h.domain_rank != ranks[j]:
                raise RankMismatch(f"bonding {j} is F_{h.domain_rank} -> F_{h.codomain_rank}, stages have ranks {ranks[j]}, {ranks[j - 1]}")
        if self.extension is not None:
            p = self.extension.period
            k = len(ranks)
            if p > len(self.bondings):
                raise ValueError(f"periodic tail of period {p} needs at least {p} bondings")
            if ranks[k - 1] != ranks[k - 1 - p]:
                raise RankMismatch("periodic tail does not close up: last rank differs from the rank one period back")

    @property
    def depth(self) -> int:
        return len(self.ranks)

    @property
    def infinite(self) -> bool:
        return self.extension is not None

    def _fold(self, j: int) -> int:
        """Index in 1..depth-1 of bonding j, applying the periodic rule."""
        k = self.depth
        if j < 1:
            raise IndexOutOfRange(f"bonding index {j} < 1")
        if j <= k - 1:
            return j
        if self.extension is None:
            raise IndexOutOfRange(f"bonding {j} beyond finite truncation of depth {k}")
        p = self.extension.period
        return k - p + (j - (k - p)) % p

    def bonding(self, j: int) -> FreeHom:
        return self.bondings[self._fold(j) - 1]

    def rank(self, alpha: int) -> int:
        if alpha < 1:
            raise IndexOutOfRange(f"stage {alpha} < 1")
        if alpha <= self.depth:
            return self.ranks[alpha - 1]
        return self.bonding(alpha - 1).domain_rank

    def max_stage(self) -> int | None:
        return None if self.infinite else self.depth

    def phase(self, alpha: int) -> int:
        """Stages from the truncation depth on are identified by the bonding that leaves them."""
        if alpha < self.depth or self.extension is None:
            return alpha
        return self._fold(alpha)

    def abelianized(self, j: int) -> np.ndarray:
        return np.array(abelianization_matrix(self.bonding(j)), dtype=object).reshape(self.rank(j), self.rank(j + 1))


def compose_bondings(P: ProFreeGroup, frm: int, to: int) -> FreeHom:
    """F_{r_frm} -> F_{r_to}: bonding(to) o ... o bonding(frm - 1)."""
    if frm < to:
        raise IndexOutOfRange(f"cannot compose from stage {frm} down to {to}")
    if to < 1:
        raise IndexOutOfRange(f"stage {to} < 1")
    out = FreeHom.identity(P.rank(frm))
    for j in range(frm - 1, to - 1, -1):
        out = P.bonding(j).compose(out)
    return out


def composed_abelianization(P: ProFreeGroup, frm: int, to: int) -> np.ndarray:
    if frm < to:
        raise IndexOutOfRange(f"cannot compose from stage {frm} down to {to}")
    out = np.array(identity_matrix(P.rank(to)), dtype=object).reshape(P.rank(to), P.rank(to))
    for j in range(to, frm):
        out = out.dot(P.abelianized(j))
    return out


@dataclass(frozen=True)
class Target:
    kind: str  # "braid", "integers" or "perm"
    size: int

    def __post_init__(self):
        if self.kind not in ("braid", "integers", "perm"):
            raise ValueError(f"unknown target kind {self.kind!r}")


@dataclass(frozen=True)
class StageMorphism:
    stage: int
    target: Target
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        for im in self.images:
            ok = (
                (self.target.kind == "braid" and isinstance(im, BraidWord) and im.strands == self.target.size)
                or (self.target.kind == "perm" and isinstance(im, Permutation) and im.degree == self.target.size)
                or (self.target.kind == "integers" and len(tuple(im)) == self.target.size)
            )
            if not ok:
                raise TargetMismatch(f"image {im!r} is not an element of the {self.target.kind} target")

    @classmethod
    def to_integers(cls, stage: int, values: Sequence[int]) -> "StageMorphism":
        return cls(stage, Target("integers", 1), tuple((int(v),) for v in values))

    @classmethod
    def to_braids(cls, stage: int, n: int, words: Sequence[BraidWord | Sequence[int]]) -> "StageMorphism":
        imgs = tuple(w if isinstance(w, BraidWord) else BraidWord(n, tuple(w)) for w in words)
        return cls(stage, Target("braid", n), imgs)


def _check_domain(P: ProFreeGroup, phi: StageMorphism) -> None:
    if phi.stage < 1 or (not P.infinite and phi.stage > P.depth):
        raise TargetMismatch(f"stage {phi.stage} is not a stage of the system")
    if len(phi.images) != P.rank(phi.stage):
        raise TargetMismatch(f"{len(phi.images)} images for a stage of rank {P.rank(phi.stage)}")


@dataclass(frozen=True)
class DivisibilityResult:
    status: str  # "divisible", "not_divisible", "unknown"
    stage: int | None = None

    @property
    def divisible(self) -> bool | None:
        return {"divisible": True, "not_divisible": False}.get(self.status)


def _residue_search(P: ProFreeGroup, start: np.ndarray, alpha: int, m: int, stage_budget: int) -> DivisibilityResult:
    """Push an integer matrix (rows x r_alpha) down the bondings until it vanishes mod m."""
    mat = start % m
    beta = alpha
    seen: set[tuple] = set()
    while True:
        if not np.any(mat % m):
            return DivisibilityResult("divisible", beta)
        if P.infinite and beta >= P.depth:
            key = (P.phase(beta), tuple(map(int, mat.ravel())))
            if key in seen:
                return DivisibilityResult("not_divisible", None)
            seen.add(key)
        elif not P.infinite and beta >= P.depth:
            return DivisibilityResult("unknown", None)
        if not P.infinite and beta >= stage_budget:
            return DivisibilityResult("unknown", None)
        mat = mat.dot(P.abelianized(beta)) % m
        beta += 1


def dual_m_divisible(P: ProFreeGroup, phi: StageMorphism, m: int, stage_budget: int = 64) -> DivisibilityResult:
    """Does phi: G_alpha -> Z become divisible by m after composing with bondings?"""
    if m < 1:
        raise ValueError("m must be positive")
    if phi.target.kind != "integers" or phi.target.size != 1:
        raise TargetMismatch("dual divisibility needs a morphism to Z")
    _check_domain(P, phi)
    row = np.array([[int(v[0]) for v in phi.images]], dtype=object).reshape(1, P.rank(phi.stage))
    return _residue_search(P, row, phi.stage, m, stage_budget)


def pro_m_divisible_abelianized(P: ProFreeGroup, m: int, stage_budget: int = 64) -> bool | None:
    """True when every stage's identity class becomes divisible by m further down.

    With a periodic tail every stage 1..depth is decided exactly.  A finite
    truncation only determines the base stage, so the answer is True when the
    base stage becomes divisible within it and None (unknown) otherwise.
    """
    if m < 1:
        raise ValueError("m must be positive")
    stages = range(1, P.depth + 1) if P.infinite else (1,)
    for alpha in stages:
        r = P.rank(alpha)
        eye = np.array(identity_matrix(r), dtype=object).reshape(r, r)
        res = _residue_search(P, eye, alpha, m, stage_budget)
        if res.status == "not_divisible":
            return False
        if res.status == "unknown":
            return None
    return True


@dataclass(frozen=True)
class StarDecision:
    stable_generators: tuple[Permutation, ...]
    stable_order: int
    star_n: bool
    star_star_n: bool
    stabilization_stage: int
    chain_orders: tuple[int, ...]
    common_fixed: frozenset[int]
    exact: bool


def stage_permutations(phi: StageMorphism) -> list[Permutation]:
    if phi.target.kind == "braid":
        return [tau(b) for b in phi.images]
    if phi.target.kind == "perm":
        return list(phi.images)
    raise TargetMismatch("star conditions need a braid or permutation target")


def decide_star_conditions(P: ProFreeGroup, phi: StageMorphism, stage_budget: int = 256) -> StarDecision:
    """Follow the descending chain of strand-permutation images down the system.

    The images at stage beta are computed by evaluating each bonding word on the
    permutations of the previous stage, so words are never expanded.
    """
    _check_domain(P, phi)
    n = phi.target.size
    perms = stage_permutations(phi)
    beta = phi.stage
    groups: list[frozenset[Permutation]] = []
    seen: dict[tuple, int] = {}
    exact = True
    while True:
        group = frozenset(closure(perms, n)) if perms else frozenset([Permutation.identity(n)])
        if groups and not group <= groups[-1]:
            raise AssertionError("permutation image chain is not descending")
        groups.append(group)
        if not P.infinite and beta >= P.depth:
            break
        if P.infinite and beta >= P.depth:
            key = (P.phase(beta), tuple(p.images for p in perms))
            if key in seen:
                break
            seen[key] = beta
        if beta - phi.stage >= stage_budget:
            exact = False
            break
        h = P.bonding(beta)
        ident = Permutation.identity(n)
        perms = [evaluate_perm_word(w, perms) if w.letters else ident for w in h.images] if perms else [ident] * h.domain_rank
        beta += 1
    stable = groups[-1]
    first = next(i for i, g in enumerate(groups) if g == stable)
    gens = tuple(sorted({p for p in perms if not p.is_identity()}, key=lambda p: p.images))
    fixed = frozenset(range(1, n + 1))
    for p in stable:
        fixed &= p.fixed_points()
    return StarDecision(
        stable_generators=gens,
        stable_order=len(stable),
        star_n=bool(fixed),
        star_star_n=len(stable) == 1,
        stabilization_stage=phi.stage + first,
        chain_orders=tuple(len(g) for g in groups),
        common_fixed=fixed,
        exact=exact,
    )


def realize_as_wedge_system(P: ProFreeGroup) -> dict[str, Any]:
    """Each stage is a wedge of r circles (a point when r = 0); each bonding sends circle j along h(x_j)."""
    stages = []
    for alpha, r in enumerate(P.ranks, start=1):
        stages.append({"stage": alpha, "space": "point" if r == 0 else "wedge", "circles": r})
    maps = []
    for j, h in enumerate(P.bondings, start=1):
        maps.append({"from": j + 1, "to": j, "circle_images": [list(w.letters) for w in h.images]})
    ext = None if P.extension is None else {"periodic_tail": P.extension.period}
    return {"stages": stages, "maps": maps, "extension": ext}


def from_wedge_system(desc: dict[str, Any]) -> ProFreeGroup:
    ranks = tuple(s["circles"] for s in desc["stages"])
    bondings = []
    for mp in desc["maps"]:
        cod = ranks[mp["to"] - 1]
        bondings.append(FreeHom(ranks[mp["from"] - 1], cod, tuple(FreeWord(cod, tuple(w)) for w in mp["circle_images"])))
    ext = desc.get("extension")
    return ProFreeGroup(ranks, tuple(bondings), PeriodicTail(ext["periodic_tail"]) if ext else None)


def constant_system(rank: int, bonding: FreeHom, depth: int = 2) -> ProFreeGroup:
    """The same bonding at every stage, with a period-1 tail."""
    return ProFreeGroup((rank,) * depth, (bonding,) * (depth - 1), PeriodicTail(1))
