"""Braid words, the strand permutation map, and the Artin word-problem oracle.

A braid word on n strands is a tuple of signed integers: ``i`` stands for
sigma_i and ``-i`` for its inverse, with 1 <= i <= n - 1.  Words are read left
to right, and the strand permutation of a product is the product of strand
permutations in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import RewriteBudget, UnsupportedN, WordBlowup
from .freegrp import FreeHom, FreeWord, apply_hom, exponent_vector, matmul, reduce_letters
from .permgroup import (  # noqa: F401  (re-exported)
    GroupReport,
    Permutation,
    StrandReport,
    perm_group_analysis,
    strand_analysis,
)

ARTIN_BUDGET = 10**6


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(a) for a in self.letters))
        if self.strands < 1:
            raise ValueError("a braid needs at least one strand")
        for a in self.letters:
            if a == 0 or abs(a) >= self.strands:
                raise ValueError(f"generator {a} out of range for {self.strands} strands")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise ValueError(f"strand counts {self.strands} and {other.strands}")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple(-a for a in reversed(self.letters)))

    def __pow__(self, k: int) -> "BraidWord":
        base = self.letters if k >= 0 else self.inverse().letters
        return BraidWord(self.strands, base * abs(k))

    def free_reduced(self) -> "BraidWord":
        return BraidWord(self.strands, reduce_letters(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"s{a}" if a > 0 else f"S{-a}" for a in self.letters)


def conjugate(x: BraidWord, y: BraidWord) -> BraidWord:
    """x y x^-1."""
    return x * y * x.inverse()


def tau(b: BraidWord) -> Permutation:
    """Strand permutation: the product of the transpositions (i, i+1)."""
    images = list(range(1, b.strands + 1))
    # pos[p] is the starting position of the strand currently at position p + 1
    pos = list(range(1, b.strands + 1))
    for a in b.letters:
        i = abs(a) - 1
        pos[i], pos[i + 1] = pos[i + 1], pos[i]
    for p, start in enumerate(pos, start=1):
        images[start - 1] = p
    return Permutation(tuple(images))


def exponent_sum(b: BraidWord) -> int:
    return sum(1 if a > 0 else -1 for a in b.letters)


@dataclass(frozen=True)
class FreeAutomorphism:
    """Automorphism of F_rank given by the images of the generators."""

    rank: int
    images: tuple[FreeWord, ...]

    def is_identity(self) -> bool:
        return all(w.letters == (i,) for i, w in enumerate(self.images, start=1))

    def as_hom(self) -> FreeHom:
        return FreeHom(self.rank, self.rank, self.images)

    def total_length(self) -> int:
        return sum(len(w) for w in self.images)


def _inv(w: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-a for a in reversed(w))


def artin_action(b: BraidWord, budget: int = ARTIN_BUDGET) -> FreeAutomorphism:
    """Automorphism of F_n induced by ``b``.

    sigma_i sends x_i to x_i x_{i+1} x_i^-1 and x_{i+1} to x_i; the automorphism of
    a word is the composite of its letters' automorphisms in reading order.
    """
    n = b.strands
    img = [(i,) for i in range(1, n + 1)]
    for a in b.letters:
        i = abs(a) - 1
        xi, xj = img[i], img[i + 1]
        if a > 0:
            img[i] = reduce_letters(xi + xj + _inv(xi))
            img[i + 1] = xi
        else:
            img[i] = xj
            img[i + 1] = reduce_letters(_inv(xj) + xi + xj)
        if len(img[i]) + len(img[i + 1]) > budget:
            raise WordBlowup(f"Artin images exceed {budget} symbols")
    return FreeAutomorphism(n, tuple(FreeWord(n, w) for w in img))


def artin_is_trivial(b: BraidWord, budget: int = ARTIN_BUDGET) -> bool:
    return artin_action(b, budget).is_identity()


def braids_equal(x: BraidWord, y: BraidWord, budget: int = ARTIN_BUDGET) -> bool:
    return artin_is_trivial(x * y.inverse(), budget)


def b_commutator_dictionary(n: int) -> dict[str, BraidWord]:
    """Generators of the commutator subgroup of B_3 or B_4, all of exponent sum 0."""
    if n not in (3, 4):
        raise UnsupportedN(f"dictionary only defined for n = 3, 4 (got {n})")
    u = BraidWord(n, (2, -1))
    v = BraidWord(n, (1, 2, -1, -1))
    if n == 3:
        return {"u": u, "v": v}
    a = BraidWord(4, (3, -1))
    return {"u": u, "v": v, "a": a, "b": conjugate(u, a)}


# Conjugation of a, b by u^{+-1}, v^{+-1}, as words in the rank-2 free group on (a, b).
CONJUGATION_TABLE: dict[str, tuple[tuple[int, ...], tuple[int, ...]]] = {
    "u": ((2,), (2, 2, -1, 2)),
    "v": ((-1, 2), (-1, 2, -1, 2, -1, 2, -1, -1, 2)),
    "U": ((1, -2, 1, 1), (1,)),
    "V": ((1, -2, 1, 1, 1), (1, -2, 1, 1, 1, 1)),
}


def dictionary_relations() -> list[tuple[str, BraidWord, BraidWord]]:
    """The eight conjugation relations in B_4 as (name, lhs, rhs) braid pairs."""
    d = b_commutator_dictionary(4)
    gens = {1: d["a"], 2: d["b"]}

    def t_word(letters: Sequence[int]) -> BraidWord:
        out = BraidWord(4)
        for x in letters:
            out = out * (gens[abs(x)] if x > 0 else gens[abs(x)].inverse())
        return out

    rels = []
    for key, (img_a, img_b) in CONJUGATION_TABLE.items():
        c = d[key.lower()] if key.islower() else d[key.lower()].inverse()
        for name, t, img in (("a", d["a"], img_a), ("b", d["b"], img_b)):
            label = f"{key} {name} {key}^-1" if key.islower() else f"{key.lower()}^-1 {name} {key.lower()}"
            rels.append((label, conjugate(c, t), t_word(img)))
    return rels


def _parse_uv(x: BraidWord | Sequence[str] | str) -> list[str]:
    if isinstance(x, str):
        return [c for c in x if not c.isspace()]
    return list(x)


def alpha_matrix(x: Sequence[str] | str, budget: int = ARTIN_BUDGET) -> tuple[tuple[int, int], tuple[int, int]]:
    """Action of conjugation by a word in u, v (``U``, ``V`` for inverses) on Ab(T) = Z^2.

    Column j is the exponent vector of x t_j x^-1 in the basis (a, b).  The
    conjugates are computed by substituting the table right to left and freely
    reducing in T.
    """
    letters = _parse_uv(x)
    for c in letters:
        if c not in CONJUGATION_TABLE:
            raise ValueError(f"letter {c!r} is not one of u, v, U, V")
    words = [(1,), (2,)]
    for c in reversed(letters):
        h = FreeHom.from_letters(2, CONJUGATION_TABLE[c])
        try:
            words = [apply_hom(h, FreeWord(2, w), max_length=budget).letters for w in words]
        except WordBlowup as exc:
            raise RewriteBudget(str(exc)) from exc
        if sum(len(w) for w in words) > budget:
            raise RewriteBudget(f"rewritten conjugates exceed {budget} letters")
    cols = [exponent_vector(FreeWord(2, w)) for w in words]
    return ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))


def uv_to_braid(x: Sequence[str] | str) -> BraidWord:
    d = b_commutator_dictionary(4)
    out = BraidWord(4)
    for c in _parse_uv(x):
        out = out * (d[c] if c.islower() else d[c.lower()].inverse())
    return out


def matrix_product(mats: Iterable[Sequence[Sequence[int]]]) -> tuple[tuple[int, ...], ...]:
    out: tuple[tuple[int, ...], ...] = ((1, 0), (0, 1))
    for m in mats:
        out = matmul(out, m)
    return out


def named_words(d: Mapping[str, BraidWord]) -> dict[str, list[int]]:
    return {k: list(v.letters) for k, v in d.items()}
