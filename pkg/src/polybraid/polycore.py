"""Monic polynomials over C: roots, discriminant, scaling action and root bounds.

A ``MonicPoly`` of degree n stores (a_0, ..., a_{n-1}) for
z^n + a_{n-1} z^{n-1} + ... + a_0.  Coefficients may be Python ints or
Fractions, in which case the discriminant is computed exactly.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DegreeTooSmall, EmptyMultiset, NonConvergence, ZeroScalar

Scalar = "complex | float | int | Fraction"


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


@dataclass(frozen=True)
class MonicPoly:
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(self.coeffs)
        if not cs:
            raise DegreeTooSmall("a monic polynomial needs degree >= 1")
        for c in cs:
            if not _is_exact(c) and not np.isfinite(complex(c)):
                raise ValueError(f"non-finite coefficient {c!r}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_roots(cls, roots: Iterable[complex]) -> "MonicPoly":
        return cls(tuple(complex(c) for c in expand(roots)))

    @classmethod
    def from_highest(cls, coeffs: Sequence) -> "MonicPoly":
        """Build from (a_{n-1}, ..., a_0), the order used on the command line."""
        return cls(tuple(reversed(list(coeffs))))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.coeffs)

    def as_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def full_coeffs(self) -> np.ndarray:
        """Coefficients from the leading 1 down to a_0 (numpy.polyval order)."""
        return np.concatenate(([1.0 + 0j], self.as_array()[::-1]))

    def norm(self) -> float:
        """Sup norm of the non-leading coefficients."""
        return float(max(abs(complex(c)) for c in self.coeffs))

    def __call__(self, z):
        return np.polyval(self.full_coeffs(), z)

    def derivative_at(self, z):
        return np.polyval(np.polyder(self.full_coeffs()), z)

    def __str__(self) -> str:
        terms = [f"z^{self.degree}"]
        for k in range(self.degree - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mon = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            terms.append(f"({c}){mon}")
        return " + ".join(terms)


@dataclass(frozen=True)
class RootMultiset:
    roots: tuple[complex, ...]
    tolerance: float = 0.0

    def __len__(self) -> int:
        return len(self.roots)

    def as_array(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)


def expand(roots: Iterable[complex]) -> np.ndarray:
    """(a_0, ..., a_{n-1}) of prod (z - r)."""
    full = np.poly(np.asarray(list(roots), dtype=complex))
    return np.asarray(full[1:][::-1], dtype=complex)


def cauchy_bound(M: float, eps: float) -> float:
    if M < 0 or eps < 0:
        raise ValueError("M and eps must be non-negative")
    return 1.0 + eps + M


def perturbation_constant(M: float, n: int) -> float:
    if M < 0 or n < 1:
        raise ValueError("need M >= 0 and n >= 1")
    return ((2.0 + M) ** n - 1.0) / (1.0 + M) + 1.0


def _expansion_error(p: MonicPoly, roots: np.ndarray) -> float:
    return float(np.max(np.abs(expand(roots) - p.as_array())))


def roots(p: MonicPoly, tol: float = 1e-9, max_iter: int = 2000) -> RootMultiset:
    """Aberth-Ehrlich simultaneous iteration started on the Cauchy circle.

    The returned roots reproduce the coefficients within ``tol * max(1, |p|)``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = p.degree
    scale = max(1.0, p.norm())
    if n == 1:
        return RootMultiset((complex(-complex(p.coeffs[0])),), tol)
    full = p.full_coeffs()
    dfull = np.polyder(full)
    absfull = np.abs(full)
    radius = cauchy_bound(p.norm(), 0.0)
    # the offset keeps start points off the real axis and off symmetric configurations
    z = radius * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    active = np.ones(n, dtype=bool)
    unit = np.finfo(float).eps
    for _ in range(max_iter):
        pz = np.polyval(full, z)
        # a root whose residual is at the rounding level of Horner's rule is frozen
        noise = 4 * n * unit * np.polyval(absfull, np.abs(z))
        active &= np.abs(pz) > noise
        if not active.any():
            break
        dpz = np.polyval(dfull, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        recip = 1.0 / diff
        np.fill_diagonal(recip, 0.0)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = pz / dpz
            step = ratio / (1 - ratio * recip.sum(axis=1))
        step = np.where(active & np.isfinite(step), step, 0.0)
        z = z - step
        if np.max(np.abs(step)) <= 4 * unit * max(1.0, float(np.max(np.abs(z)))):
            break
    z = _collapse_clusters(p, z)
    err = _expansion_error(p, z)
    if not err <= tol * scale:
        raise NonConvergence(f"root expansion error {err:.3g} exceeds {tol * scale:.3g}")
    return RootMultiset(tuple(complex(x) for x in z), tol)


def _collapse_clusters(p: MonicPoly, z: np.ndarray) -> np.ndarray:
    """Replace tight clusters by one refined centre when that reproduces p better.

    Near a root of multiplicity m the iterates scatter at the eps^(1/m) scale,
    while a Newton step on the (m-1)-th derivative pins the centre to rounding.
    """
    n = len(z)
    best, best_err = z, _expansion_error(p, z)
    size = max(1.0, float(np.max(np.abs(z))))
    for thresh in (1e-6, 1e-5, 1e-4, 1e-3, 1e-2):
        label = list(range(n))
        for i in range(n):
            for j in range(i + 1, n):
                if abs(best[i] - best[j]) < thresh * size:
                    a, b = label[i], label[j]
                    label = [a if x == b else x for x in label]
        for lab in sorted(set(label)):
            idx = [i for i in range(n) if label[i] == lab]
            if len(idx) < 2:
                continue
            cand = best.copy()
            cand[idx] = _refine_multiple(p, complex(np.mean(best[idx])), len(idx))
            err = _expansion_error(p, cand)
            if err < best_err:
                best, best_err = cand, err
    return best


def _refine_multiple(p: MonicPoly, c: complex, m: int, steps: int = 8) -> complex:
    d = np.polyder(p.full_coeffs(), m - 1)
    dd = np.polyder(d)
    for _ in range(steps):
        slope = np.polyval(dd, c)
        if slope == 0:
            break
        nxt = c - np.polyval(d, c) / slope
        if not np.isfinite(nxt) or nxt == c:
            break
        c = complex(nxt)
    return c


def sylvester_matrix(f: Sequence, g: Sequence) -> list[list]:
    """Sylvester matrix of polynomials given highest degree first."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    zero = 0 * f[0]
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g) + [zero] * (size - n - 1 - i))
    return rows


def _exact_det(mat: list[list]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in mat]
    size = len(a)
    det = Fraction(1)
    for col in range(size):
        pivot = next((r for r in range(col, size) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, size):
            f = a[r][col] * inv
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def _disc_sign(n: int) -> int:
    return -1 if (n * (n - 1) // 2) % 2 else 1


def discriminant(p: MonicPoly):
    """Monic discriminant (-1)^{n(n-1)/2} Res(p, p'), so z^2 + a z + b gives a^2 - 4b."""
    n = p.degree
    if n < 2:
        raise DegreeTooSmall("discriminant needs degree >= 2")
    if p.is_exact:
        full = [1] + list(reversed(p.coeffs))
        der = [(n - k) * full[k] for k in range(n)]
        d = _disc_sign(n) * _exact_det(sylvester_matrix(full, der))
        return int(d) if d.denominator == 1 else d
    # rescale by a power of two so the coefficients are balanced; exact in binary
    a = p.as_array()
    k = np.arange(n, 0, -1)
    s = max(abs(a[n - j]) ** (1.0 / j) for j in range(1, n + 1))
    e = 0 if s == 0 else int(math.floor(math.log2(s)))
    e = max(-(1000 // n), min(1000 // n, e))  # keep s2**n a normal float
    s2 = 2.0**e
    scaled = a / s2**k
    full = np.concatenate(([1.0 + 0j], scaled[::-1]))
    der = np.polyder(full)
    mat = np.array(sylvester_matrix(list(full), list(der)), dtype=complex)
    d = _disc_sign(n) * np.linalg.det(mat)
    return complex(d) * s2 ** (n * (n - 1))


def repeated_root_threshold(p: MonicPoly) -> float:
    n = p.degree
    return 1e-12 * max(1.0, p.norm()) ** (n * (n - 1))


def has_repeated_root(p: MonicPoly) -> bool:
    d = discriminant(p)
    if p.is_exact:
        return d == 0
    return abs(d) < repeated_root_threshold(p)


def discriminant_from_roots(rs: Sequence[complex]) -> complex:
    r = np.asarray(rs, dtype=complex)
    out = 1.0 + 0j
    for i in range(len(r)):
        for j in range(i + 1, len(r)):
            out *= (r[i] - r[j]) ** 2
    return complex(out)


def star_action(mu: complex, p: MonicPoly) -> MonicPoly:
    """Scale the roots by mu: a_{n-k} is multiplied by mu^k."""
    if mu == 0:
        raise ZeroScalar("mu must be nonzero")
    n = p.degree
    exact = isinstance(mu, numbers.Rational) and p.is_exact
    out = []
    for idx, c in enumerate(p.coeffs):
        k = n - idx
        out.append(c * mu**k if exact else complex(c) * complex(mu) ** k)
    return MonicPoly(tuple(out))


def multiset_distance(z: complex, A: RootMultiset | Sequence[complex]) -> float:
    rs = A.roots if isinstance(A, RootMultiset) else tuple(A)
    if not rs:
        raise EmptyMultiset("distance to an empty multiset")
    return float(min(abs(complex(z) - complex(w)) for w in rs))


def pairwise_min_gap(rs: Sequence[complex]) -> float:
    r = np.asarray(rs, dtype=complex)
    if len(r) < 2:
        return math.inf
    d = np.abs(r[:, None] - r[None, :])
    d[np.diag_indices(len(r))] = np.inf
    return float(d.min())


def min_root_gap(p: MonicPoly, tol: float = 1e-9) -> float:
    if p.degree < 2:
        raise DegreeTooSmall("root gap needs degree >= 2")
    if has_repeated_root(p):
        return 0.0
    return pairwise_min_gap(roots(p, tol).roots)
