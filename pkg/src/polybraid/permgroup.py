"""Permutations of {1..n} and brute-force analysis of small permutation groups.

Products compose left to right: ``(p * q)(i) == q(p(i))``.  This matches
reading a braid word or a loop from left to right, so that the strand map of a
concatenation is the product of the strand maps.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from .errors import MixedDegrees


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}; ``images[i - 1]`` is the image of ``i``."""

    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.images)}: {self.images}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(1, n + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a - 1] = b
        return cls(tuple(images))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        return cls.from_cycles(n, [(i, j)])

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if other.degree != self.degree:
            raise MixedDegrees(f"degrees {self.degree} and {other.degree}")
        return Permutation(tuple(other.images[i - 1] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images, start=1))

    def fixed_points(self) -> frozenset[int]:
        return frozenset(i for i, j in enumerate(self.images, start=1) if i == j)

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest point."""
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)


def commutator(g: Permutation, h: Permutation) -> Permutation:
    return g * h * g.inverse() * h.inverse()


def closure(gens: Sequence[Permutation], degree: int | None = None) -> list[Permutation]:
    """All elements of <gens>, in breadth-first order from the identity."""
    if not gens and degree is None:
        raise ValueError("need generators or a degree")
    n = gens[0].degree if gens else degree
    if any(g.degree != n for g in gens):
        raise MixedDegrees("generators act on different point sets")
    e = Permutation.identity(n)
    seen = {e}
    order = [e]
    queue = deque([e])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h not in seen:
                seen.add(h)
                order.append(h)
                queue.append(h)
    return order


def _normal_closure(gens: Sequence[Permutation], ambient: Sequence[Permutation], n: int) -> list[Permutation]:
    gens = list(gens)
    group = set(closure(gens, n))
    grew = True
    while grew:
        grew = False
        for a in ambient:
            ainv = a.inverse()
            for g in list(gens):
                c = ainv * g * a
                if c not in group:
                    gens.append(c)
                    group = set(closure(gens, n))
                    grew = True
    return sorted(group, key=lambda p: p.images)


def derived_subgroup(gens: Sequence[Permutation], n: int) -> list[Permutation]:
    """All elements of the commutator subgroup of <gens> (normal closure of the [s, t])."""
    comms = [commutator(s, t) for s in gens for t in gens]
    comms = [c for c in comms if not c.is_identity()]
    if not comms:
        return []
    return _normal_closure(comms, gens, n)


def small_generating_set(elements: Sequence[Permutation]) -> list[Permutation]:
    """Greedy generating set for the group whose elements are listed."""
    if not elements:
        return []
    n = elements[0].degree
    gens: list[Permutation] = []
    span = {Permutation.identity(n)}
    for g in elements:
        if g not in span:
            gens.append(g)
            span = set(closure(gens, n))
    return gens


@dataclass(frozen=True)
class StrandReport:
    pure: bool
    common_fixed: frozenset[int]


def strand_analysis(perms: Sequence[Permutation], degree: int | None = None) -> StrandReport:
    """Is every permutation trivial, and which points do all of them fix?"""
    if not perms:
        if degree is None:
            raise ValueError("empty permutation list needs an explicit degree")
        return StrandReport(True, frozenset(range(1, degree + 1)))
    n = perms[0].degree
    if any(p.degree != n for p in perms) or (degree is not None and degree != n):
        raise MixedDegrees("permutations act on different numbers of strands")
    fixed = frozenset(range(1, n + 1))
    for p in perms:
        fixed &= p.fixed_points()
    return StrandReport(all(p.is_identity() for p in perms), fixed)


@dataclass(frozen=True)
class GroupReport:
    order: int
    derived_orders: tuple[int, ...]
    exponent: int
    is_solvable: bool

    @property
    def derived_length(self) -> int:
        return len(self.derived_orders)

    @property
    def is_perfect(self) -> bool:
        return len(self.derived_orders) > 1 and self.derived_orders[1] == self.order


def perm_group_analysis(gens: Sequence[Permutation]) -> GroupReport:
    """Order, derived series, exponent and solvability of <gens> by enumeration.

    ``derived_orders`` lists |G|, |G'|, |G''|, ... stopping at the first repeat
    or at the trivial group.
    """
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].degree
    elements = closure(gens)
    exponent = reduce(math.lcm, (g.order() for g in elements), 1)
    orders = [len(elements)]
    current = list(gens)
    while orders[-1] > 1:
        nxt = derived_subgroup(current, n)
        size = len(nxt) if nxt else 1
        if size == orders[-1]:
            orders.append(size)
            break
        orders.append(size)
        current = small_generating_set(nxt)
    return GroupReport(
        order=len(elements),
        derived_orders=tuple(orders),
        exponent=exponent,
        is_solvable=orders[-1] == 1,
    )
