"""Free groups: words, homomorphisms, and subgroup graphs.

Generators of F_r are the integers 1..r and their inverses -1..-r.  Subgroups
are carried by folded labelled graphs: Schreier coset graphs for kernels of
maps onto finite permutation groups, and Stallings graphs obtained by folding
a bouquet of generator loops.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import NotFolded, RankMismatch, WordBlowup
from .permgroup import Permutation, closure

_NAMES = "xyzw"


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for a in letters:
        if stack and stack[-1] == -a:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


@dataclass(frozen=True)
class FreeWord:
    """Element of the free group of the given rank (letters need not be reduced)."""

    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(int(a) for a in self.letters))
        for a in self.letters:
            if a == 0 or abs(a) > self.rank:
                raise ValueError(f"letter {a} out of range for rank {self.rank}")

    @classmethod
    def gen(cls, rank: int, i: int) -> "FreeWord":
        return cls(rank, (i,))

    @classmethod
    def parse(cls, rank: int, text: str) -> "FreeWord":
        """Parse ``"x y X"``-style text; uppercase is the inverse.  Ranks > 4 use x1, X1, ..."""
        letters = []
        for tok in text.replace("*", " ").split():
            if rank <= len(_NAMES) and len(tok) == 1:
                idx = _NAMES.index(tok.lower()) + 1
                letters.append(-idx if tok.isupper() else idx)
            else:
                idx = int(tok[1:])
                letters.append(-idx if tok[0] == "X" else idx)
        return cls(rank, tuple(letters))

    def reduced(self) -> "FreeWord":
        return FreeWord(self.rank, reduce_letters(self.letters))

    def is_reduced(self) -> bool:
        return all(a != -b for a, b in zip(self.letters, self.letters[1:]))

    def is_identity(self) -> bool:
        return not reduce_letters(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        if other.rank != self.rank:
            raise RankMismatch(f"ranks {self.rank} and {other.rank}")
        return FreeWord(self.rank, reduce_letters(self.letters + other.letters))

    def inverse(self) -> "FreeWord":
        return FreeWord(self.rank, tuple(-a for a in reversed(self.letters)))

    def __pow__(self, k: int) -> "FreeWord":
        base = self.letters if k >= 0 else self.inverse().letters
        return FreeWord(self.rank, reduce_letters(base * abs(k)))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        out = []
        for a in self.letters:
            if self.rank <= len(_NAMES):
                name = _NAMES[abs(a) - 1]
                out.append(name if a > 0 else name.upper())
            else:
                out.append(f"{'x' if a > 0 else 'X'}{abs(a)}")
        return " ".join(out)


def reduce(w: FreeWord) -> FreeWord:
    return w.reduced()


def commutator(a: FreeWord, b: FreeWord) -> FreeWord:
    """a b a^-1 b^-1."""
    return a * b * a.inverse() * b.inverse()


def exponent_vector(w: FreeWord) -> tuple[int, ...]:
    vec = [0] * w.rank
    for a in w.letters:
        vec[abs(a) - 1] += 1 if a > 0 else -1
    return tuple(vec)


@dataclass(frozen=True)
class FreeHom:
    """Homomorphism F_domain_rank -> F_codomain_rank given by generator images."""

    domain_rank: int
    codomain_rank: int
    images: tuple[FreeWord, ...]

    def __post_init__(self):
        imgs = tuple(w.reduced() for w in self.images)
        if len(imgs) != self.domain_rank:
            raise RankMismatch(f"{len(imgs)} images for domain rank {self.domain_rank}")
        if any(w.rank != self.codomain_rank for w in imgs):
            raise RankMismatch("image word rank differs from codomain rank")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, rank: int) -> "FreeHom":
        return cls(rank, rank, tuple(FreeWord.gen(rank, i) for i in range(1, rank + 1)))

    @classmethod
    def from_letters(cls, codomain_rank: int, images: Sequence[Sequence[int]]) -> "FreeHom":
        return cls(len(images), codomain_rank, tuple(FreeWord(codomain_rank, tuple(w)) for w in images))

    def __call__(self, w: FreeWord) -> FreeWord:
        return apply_hom(self, w)

    def compose(self, inner: "FreeHom") -> "FreeHom":
        """``self o inner``: apply ``inner`` first."""
        if inner.codomain_rank != self.domain_rank:
            raise RankMismatch(f"cannot compose: {inner.codomain_rank} -> {self.domain_rank}")
        return FreeHom(inner.domain_rank, self.codomain_rank, tuple(apply_hom(self, w) for w in inner.images))


def apply_hom(h: FreeHom, w: FreeWord, max_length: int | None = None) -> FreeWord:
    if w.rank != h.domain_rank:
        raise RankMismatch(f"word of rank {w.rank} fed to hom with domain rank {h.domain_rank}")
    stack: list[int] = []
    for a in w.letters:
        img = h.images[abs(a) - 1].letters
        if a < 0:
            img = tuple(-b for b in reversed(img))
        for b in img:
            if stack and stack[-1] == -b:
                stack.pop()
            else:
                stack.append(b)
        if max_length is not None and len(stack) > max_length:
            raise WordBlowup(f"image word exceeds {max_length} letters")
    return FreeWord(h.codomain_rank, tuple(stack))


def evaluate_perm_word(w: FreeWord | Sequence[int], gens: Sequence[Permutation]) -> Permutation:
    """Image of a word under the map sending generator i to ``gens[i - 1]``."""
    letters = w.letters if isinstance(w, FreeWord) else tuple(w)
    out = Permutation.identity(gens[0].degree)
    invs = [g.inverse() for g in gens]
    for a in letters:
        out = out * (gens[a - 1] if a > 0 else invs[-a - 1])
    return out


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    inner = len(B)
    cols = len(B[0]) if B else 0
    if A and len(A[0]) != inner:
        raise RankMismatch("matrix shapes do not chain")
    return tuple(tuple(sum(row[k] * B[k][j] for k in range(inner)) for j in range(cols)) for row in A)


def identity_matrix(r: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def abelianization_matrix(h: FreeHom) -> tuple[tuple[int, ...], ...]:
    """Integer s x r matrix whose column j is the exponent vector of h(x_j)."""
    cols = [exponent_vector(w) for w in h.images]
    return tuple(tuple(cols[j][i] for j in range(h.domain_rank)) for i in range(h.codomain_rank))


@dataclass(frozen=True)
class SubgroupGraph:
    """Labelled digraph with base vertex 0; edge (u, j, v) reads generator j from u to v."""

    rank: int
    n_vertices: int
    edges: tuple[tuple[int, int, int], ...]
    base: int = 0

    @cached_property
    def out(self) -> dict[tuple[int, int], int]:
        table: dict[tuple[int, int], int] = {}
        for u, j, v in self.edges:
            table[(u, j)] = v
            table[(v, -j)] = u
        return table

    def is_folded(self) -> bool:
        seen: set[tuple[int, int]] = set()
        for u, j, v in self.edges:
            if (u, j) in seen or (v, -j) in seen:
                return False
            seen.add((u, j))
            seen.add((v, -j))
        return True

    def is_connected(self) -> bool:
        reach = {self.base}
        queue = deque([self.base])
        adj: dict[int, list[int]] = {}
        for u, _, v in self.edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        while queue:
            u = queue.popleft()
            for v in adj.get(u, ()):
                if v not in reach:
                    reach.add(v)
                    queue.append(v)
        return len(reach) == self.n_vertices

    def read(self, w: FreeWord, start: int | None = None) -> int | None:
        """Vertex reached by reading ``w``, or None if the path leaves the graph."""
        v = self.base if start is None else start
        for a in w.letters:
            nxt = self.out.get((v, a))
            if nxt is None:
                return None
            v = nxt
        return v

    def contains(self, w: FreeWord) -> bool:
        return self.read(w.reduced()) == self.base

    @property
    def euler_rank(self) -> int:
        return len(self.edges) - self.n_vertices + 1


def schreier_kernel(images: Sequence[Permutation]) -> SubgroupGraph:
    """Coset graph of ker(F_r -> <images>), one vertex per element of the image group."""
    if not images:
        raise ValueError("need at least one generator image")
    elements = closure(list(images))
    index = {g: i for i, g in enumerate(elements)}
    edges = []
    for i, g in enumerate(elements):
        for j, s in enumerate(images, start=1):
            edges.append((i, j, index[g * s]))
    return SubgroupGraph(rank=len(images), n_vertices=len(elements), edges=tuple(edges))


@dataclass(frozen=True)
class FreeBasis:
    rank: int
    basis: tuple[FreeWord, ...]
    tree_paths: dict = field(compare=False, repr=False, default_factory=dict)


def free_basis_and_rank(g: SubgroupGraph) -> FreeBasis:
    """Nielsen-Schreier basis read off a BFS spanning tree (ties by generator index)."""
    if not g.is_folded():
        raise NotFolded("graph has two equally labelled edges at a vertex")
    if not g.is_connected():
        raise NotFolded("graph is not connected")
    paths: dict[int, tuple[int, ...]] = {g.base: ()}
    order = [g.base]
    tree: set[tuple[int, int, int]] = set()
    queue = deque([g.base])
    labels = [j for i in range(1, g.rank + 1) for j in (i, -i)]
    by_endpoint = {}
    for e in g.edges:
        u, j, v = e
        by_endpoint[(u, j)] = e
        by_endpoint[(v, -j)] = e
    while queue:
        u = queue.popleft()
        for j in labels:
            e = by_endpoint.get((u, j))
            if e is None:
                continue
            v = g.out[(u, j)]
            if v not in paths:
                paths[v] = paths[u] + (j,)
                tree.add(e)
                order.append(v)
                queue.append(v)
    pos = {v: i for i, v in enumerate(order)}
    basis = []
    for u, j, v in sorted((e for e in g.edges if e not in tree), key=lambda e: (pos[e[0]], e[1], pos[e[2]])):
        word = FreeWord(g.rank, reduce_letters(paths[u] + (j,) + tuple(-a for a in reversed(paths[v]))))
        basis.append(word)
    return FreeBasis(rank=g.euler_rank, basis=tuple(basis), tree_paths=paths)


def stallings_graph(words: Sequence[FreeWord]) -> SubgroupGraph:
    """Fold a bouquet of loops spelling ``words`` into the subgroup graph of <words>."""
    if not words:
        raise ValueError("need at least one word")
    rank = words[0].rank
    edges: list[tuple[int, int, int]] = []
    n = 1
    for w in words:
        letters = w.reduced().letters
        if not letters:
            continue
        prev = 0
        for k, a in enumerate(letters):
            nxt = 0 if k == len(letters) - 1 else n
            if nxt:
                n += 1
            edges.append((prev, a, nxt) if a > 0 else (nxt, -a, prev))
            prev = nxt
    return _fold(rank, n, edges)


def _fold(rank: int, n: int, edges: list[tuple[int, int, int]]) -> SubgroupGraph:
    parent = list(range(n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    changed = True
    current = set(edges)
    while changed:
        changed = False
        current = {(find(u), j, find(v)) for u, j, v in current}
        seen: dict[tuple[int, int], int] = {}
        for u, j, v in sorted(current):
            for key, other in (((u, j), v), ((v, -j), u)):
                if key in seen and find(seen[key]) != find(other):
                    a, b = sorted((find(seen[key]), find(other)))
                    parent[b] = a
                    changed = True
                seen.setdefault(key, other)
            if changed:
                break
    current = {(find(u), j, find(v)) for u, j, v in current}
    roots = sorted({find(v) for v in range(n)} & ({0} | {u for u, _, _ in current} | {v for _, _, v in current}))
    roots.remove(find(0))
    relabel = {find(0): 0}
    for r in roots:
        relabel[r] = len(relabel)
    new_edges = tuple(sorted((relabel[u], j, relabel[v]) for u, j, v in current))
    return SubgroupGraph(rank=rank, n_vertices=len(relabel), edges=new_edges)
