"""Exact SL_2(Z) arithmetic and normal forms in PSL_2(Z) = Z/2 * Z/3.

Generators: S = [[0, -1], [1, 0]] of order 4 (order 2 in PSL) and
Q = [[1, -1], [1, 0]] of order 6 (order 3 in PSL).  A normal form is an
alternating word in "S" and "Q" / "q" (q = Q^-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .braid import alpha_matrix
from .errors import EntryBlowup, IdentityFails, NotUnimodular, ReferenceMismatch

ENTRY_LIMIT = 1 << 4096


@dataclass(frozen=True)
class IntMatrix2:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for x in (self.a, self.b, self.c, self.d):
            if not isinstance(x, int):
                raise TypeError("entries must be Python ints")
            if abs(x) > ENTRY_LIMIT:
                raise EntryBlowup("matrix entry exceeds the size guard")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, o: "IntMatrix2") -> "IntMatrix2":
        return IntMatrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> "IntMatrix2":
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "IntMatrix2":
        if self.det != 1:
            raise NotUnimodular(f"determinant {self.det}")
        return IntMatrix2(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> "IntMatrix2":
        base = self if k >= 0 else self.inverse()
        out = IDENTITY
        for _ in range(abs(k)):
            out = out @ base
        return out

    def is_pm_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d and abs(self.a) == 1

    def equal_in_psl(self, o: "IntMatrix2") -> bool:
        return self == o or self == -o

    def minus_identity(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a - 1, self.b), (self.c, self.d - 1))


IDENTITY = IntMatrix2(1, 0, 0, 1)
S = IntMatrix2(0, -1, 1, 0)
Q = IntMatrix2(1, -1, 1, 0)
U_REF = IntMatrix2(0, -1, 1, 3)
V_REF = IntMatrix2(-1, -5, 1, 4)
T_MAT = IntMatrix2(1, 1, 0, 1)

LETTERS = {"S": S, "Q": Q, "q": Q.inverse()}


@dataclass(frozen=True)
class PSLWord:
    letters: str = ""

    def __post_init__(self):
        for ch in self.letters:
            if ch not in LETTERS:
                raise ValueError(f"unknown letter {ch!r}")

    def is_normal(self) -> bool:
        w = self.letters
        for x, y in zip(w, w[1:]):
            if (x == "S") == (y == "S"):
                return False
        return True

    def evaluate(self) -> IntMatrix2:
        return evaluate_word(self.letters)

    def exponent_sums(self) -> tuple[int, int]:
        """(number of S letters, signed count of Q letters)."""
        s = self.letters.count("S")
        q = self.letters.count("Q") - self.letters.count("q")
        return s, q

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters or "1"


def evaluate_word(letters: str) -> IntMatrix2:
    out = IDENTITY
    for ch in letters:
        out = out @ LETTERS[ch]
    return out


def reduce_free_product(letters: str) -> str:
    """Normal form in Z/2 * Z/3: S^2 = 1, Q^3 = 1, letters alternate."""
    stack: list[tuple[str, int]] = []  # ("S", 1) or ("Q", e) with e in {1, 2}
    for ch in letters:
        kind, e = ("S", 1) if ch == "S" else ("Q", 1 if ch == "Q" else 2)
        if stack and stack[-1][0] == kind:
            _, e0 = stack.pop()
            tot = (e0 + e) % (2 if kind == "S" else 3)
            if tot:
                stack.append((kind, tot))
        else:
            stack.append((kind, e))
    return "".join("S" if k == "S" else ("Q" if e == 1 else "q") for k, e in stack)


def _euclid_letters(M: IntMatrix2) -> str:
    """A word in S, Q, q evaluating to +-M, via the Euclidean algorithm on the first column.

    Uses T = [[1, 1], [0, 1]] = -Q S, so T = QS and T^-1 = S Q^-1 in PSL.
    """
    left: list[tuple[str, int]] = []
    # peel off M = T^k1 S T^k2 S ... until the first column is (+-1, 0)
    cur = M
    while cur.c != 0:
        if abs(cur.a) >= abs(cur.c):
            k = cur.a // cur.c
            # cur = T^k * (T^-k cur)
            cur = (T_MAT ** (-k)) @ cur
            left.append(("T", k))
        else:
            # cur = S * (S^-1 cur)
            cur = S.inverse() @ cur
            left.append(("S", 1))
    # cur is upper triangular with a = d = +-1: cur = +-T^b'
    k = cur.b * cur.a
    left.append(("T", k))
    out = []
    for kind, k in left:
        if kind == "S":
            out.append("S")
        elif k > 0:
            out.append("QS" * k)
        elif k < 0:
            out.append("Sq" * (-k))
    return "".join(out)


def psl_normal_form(M: IntMatrix2) -> PSLWord:
    if M.det != 1:
        raise NotUnimodular(f"determinant {M.det} != 1")
    word = PSLWord(reduce_free_product(_euclid_letters(M)))
    if not word.evaluate().equal_in_psl(M):
        raise AssertionError("normal form does not evaluate to the input")
    return word


@dataclass(frozen=True)
class FreePairVerdict:
    free: bool
    length: int
    relation: str | None = None
    words_checked: int = 0


def free_pair_check(A: IntMatrix2, B: IntMatrix2, length_budget: int = 10) -> FreePairVerdict:
    """Search reduced words in A, B (a, b for inverses) up to the budget for one trivial in PSL.

    Words are visited by length, so a reported relation is a shortest one.
    """
    for M in (A, B):
        if M.det != 1:
            raise NotUnimodular(f"determinant {M.det} != 1")
    gens = {"A": A, "a": A.inverse(), "B": B, "b": B.inverse()}
    inverse_of = {"A": "a", "a": "A", "B": "b", "b": "B"}
    checked = 0
    level: list[tuple[str, IntMatrix2]] = [(g, gens[g]) for g in "AaBb"]
    for length in range(1, length_budget + 1):
        for word, M in level:
            checked += 1
            if M.is_pm_identity():
                return FreePairVerdict(False, length, word, checked)
        if length == length_budget:
            break
        level = [(w + g, M @ gens[g]) for w, M in level for g in "AaBb" if g != inverse_of[w[-1]]]
    return FreePairVerdict(True, length_budget, None, checked)


def _smith_rank(cols: list[list[int]]) -> int:
    """Rank over Z of the span of integer column vectors, by integer row reduction."""
    mat = [list(c) for c in cols if any(c)]
    rank = 0
    nrows = len(mat[0]) if mat else 0
    for i in range(nrows):
        rows = [v for v in mat if v[i] != 0]
        rest = [v for v in mat if v[i] == 0]
        while len(rows) > 1:
            rows.sort(key=lambda v: abs(v[i]))
            piv = rows[0]
            nxt = [piv]
            for v in rows[1:]:
                q = v[i] // piv[i]
                w = [x - q * y for x, y in zip(v, piv)]
                (nxt if w[i] != 0 else rest).append(w)
            rows = nxt
        if rows:
            rank += 1
        mat = [v for v in rest if any(v)]
    return rank


def image_rank_sum(A: IntMatrix2, B: IntMatrix2) -> int:
    cols = []
    for M in (A, B):
        (p, q), (r, s) = M.minus_identity()
        cols += [[p, r], [q, s]]
    return _smith_rank(cols)


def derive_b4_matrices() -> tuple[IntMatrix2, IntMatrix2]:
    U = IntMatrix2.from_rows(alpha_matrix("u"))
    V = IntMatrix2.from_rows(alpha_matrix("v"))
    if U != U_REF or V != V_REF:
        raise ReferenceMismatch(f"derived U = {U.rows()}, V = {V.rows()}")
    return U, V


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    product: IntMatrix2
    target: IntMatrix2
    sign: int


def verify_uv_identities() -> list[IdentityCheck]:
    """S (QS)^3 and S Q^-1 S Q U against U and V; equality holds up to sign."""
    U, V = U_REF, V_REF
    checks = []
    for name, prod, target in (
        ("S(QS)^3 = U", evaluate_word("SQSQSQS"), U),
        ("SQ^-1SQU = V", evaluate_word("SqSQ") @ U, V),
    ):
        if prod == target:
            sign = 1
        elif prod == -target:
            sign = -1
        else:
            raise IdentityFails(f"{name}: got {prod.rows()}")
        checks.append(IdentityCheck(name, prod, target, sign))
    return checks


def all_reduced_words(length: int) -> list[str]:
    """Reduced words of exactly this length over A, a, B, b."""
    inverse_of = {"A": "a", "a": "A", "B": "b", "b": "B"}
    out = []
    for w in product("AaBb", repeat=length):
        if all(inverse_of[x] != y for x, y in zip(w, w[1:])):
            out.append("".join(w))
    return out
