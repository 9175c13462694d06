"""
Integer lattices and the transcendental lattice of an SL(2,Z) factorization.

For f = (M_1, ..., M_r) the ambient module is Z^{2r} = (Z^2)^r with

    chi(x) = sum (M_i - 1) x_i,
    q(x)   = -sum det(x_i | M_i x_i) + sum_{i<j} det((M_i - 1) x_i | (M_j - 1) x_j).

q is stored as an upper triangular integer matrix Q with q(x) = x^T Q x.  On
ker chi the polarization q(x+y) - q(x) - q(y) is even, and its half is the
Gram form; the transcendental lattice is ker chi modulo the radical.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .group import SL2, Gamma, NotSimple, is_simple, lift_simple
from .intmat import (Matrix, det, identity, kernel_basis, lll_gram, mat_mul,
                     smith_form, transpose)

__all__ = [
    "IntLattice", "FactorizationForm", "Indefinite", "RankTooLarge",
    "build_form", "transcendental_lattice", "colored_lattice", "coloring_fingerprints",
    "named_lattice", "isometric", "reduce", "transition_matrix", "complement_lattice",
]


class Indefinite(ValueError):
    pass


class RankTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class IntLattice:
    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        for i in range(n):
            if len(g[i]) != n:
                raise ValueError("Gram matrix is not square")
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise ValueError("Gram matrix is not symmetric")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def det(self) -> int:
        return det(self.gram)

    def is_positive_definite(self) -> bool:
        return all(det([row[:i] for row in self.gram[:i]]) > 0 for i in range(1, self.rank + 1))

    def fingerprint(self, bound: int = 6) -> str:
        """Rank, determinant and the number of vectors of each norm <= bound."""
        if self.rank == 0:
            return "0|1|"
        if not self.is_positive_definite():
            return f"{self.rank}|{self.det}|indefinite"
        counts = Counter(norm for norm in _short_norms(self.gram, bound))
        spectrum = ",".join(f"{n}:{counts[n]}" for n in sorted(counts))
        return f"{self.rank}|{self.det}|{spectrum}"

    def to_dict(self) -> dict:
        return {"rank": self.rank, "gram": [list(r) for r in self.gram],
                "det": self.det, "fingerprint": self.fingerprint()}


# ---------------------------------------------------------------------------
# short vectors

def _cholesky(gram: Sequence[Sequence[int]]) -> list[list[float]]:
    n = len(gram)
    low = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = gram[i][j] - sum(low[i][k] * low[j][k] for k in range(j))
            if i == j:
                if s <= 0:
                    raise Indefinite("Gram matrix is not positive definite")
                low[i][i] = math.sqrt(s)
            else:
                low[i][j] = s / low[j][j]
    return low


def short_vectors(gram: Sequence[Sequence[int]], bound: int) -> list[tuple[tuple[int, ...], int]]:
    """All nonzero coefficient vectors v with v G v^T <= bound, with their norms."""
    n = len(gram)
    if n == 0:
        return []
    # upper triangular R with G = R^T R; enumerate from the last coordinate
    low = _cholesky(gram)
    r = transpose(low)  # R[i][j] = L[j][i]
    out = []
    v = [0] * n
    eps = 1e-9

    def rec(i: int, remaining: float) -> None:
        # contribution of coordinate i: (sum_{j>=i} R[i][j] v_j)^2
        c = sum(r[i][j] * v[j] for j in range(i + 1, n))
        rii = r[i][i]
        span = math.sqrt(max(remaining, 0.0)) / rii
        centre = -c / rii
        lo = math.ceil(centre - span - eps)
        hi = math.floor(centre + span + eps)
        for x in range(lo, hi + 1):
            v[i] = x
            t = (rii * x + c) ** 2
            if t > remaining + eps:
                continue
            if i == 0:
                if any(v):
                    vec = tuple(v)
                    norm = sum(vec[a] * gram[a][b] * vec[b] for a in range(n) for b in range(n))
                    if norm <= bound:
                        out.append((vec, norm))
            else:
                rec(i - 1, remaining - t)
        v[i] = 0

    rec(n - 1, float(bound))
    return out


def _short_norms(gram, bound):
    return [norm for _, norm in short_vectors(gram, bound)]


# ---------------------------------------------------------------------------
# named lattices, reduction, isometry

def named_lattice(name: str, k: int) -> IntLattice:
    """Root lattices A_k and D_k in their root bases (D_0 = 0, D_2 = 2A_1)."""
    name = name.upper()
    if k < 0:
        raise ValueError("rank must be non-negative")
    if name == "A":
        g = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(k)] for i in range(k)]
        return IntLattice(g)
    if name == "D":
        if k == 1:
            return IntLattice([[4]])
        # roots e1-e2, ..., e_{k-1}-e_k, e_{k-1}+e_k
        roots = []
        for i in range(k - 1):
            v = [0] * k
            v[i], v[i + 1] = 1, -1
            roots.append(v)
        if k >= 2:
            v = [0] * k
            v[k - 2], v[k - 1] = 1, 1
            roots.append(v)
        return IntLattice(mat_mul(roots, transpose(roots)))
    raise ValueError(f"unknown lattice family {name!r}")


def reduce(lat: IntLattice) -> IntLattice:
    """LLL-reduced Gram matrix of a positive definite lattice."""
    if lat.rank == 0:
        return lat
    if not lat.is_positive_definite():
        raise Indefinite("reduction needs a positive definite lattice")
    g, _ = lll_gram(lat.gram)
    return IntLattice(g)


def isometric(a: IntLattice, b: IntLattice) -> bool:
    """Exact isometry test for positive definite lattices of rank <= 8."""
    if a.rank != b.rank:
        return False
    if a.rank == 0:
        return True
    if a.rank > 8:
        raise RankTooLarge("isometry search is limited to rank 8")
    for lat in (a, b):
        if not lat.is_positive_definite():
            raise Indefinite("isometry search needs positive definite lattices")
    if a.det != b.det:
        return False
    ga, gb = reduce(a).gram, reduce(b).gram
    if IntLattice(ga).fingerprint() != IntLattice(gb).fingerprint():
        return False
    n = a.rank
    bound = max(ga[i][i] for i in range(n))
    cand = short_vectors(gb, bound)
    by_norm: dict[int, list[tuple[int, ...]]] = {}
    for vec, norm in cand:
        by_norm.setdefault(norm, []).append(vec)

    def ip(u, v):
        return sum(u[i] * gb[i][j] * v[j] for i in range(n) for j in range(n))

    chosen: list[tuple[int, ...]] = []

    def search(i: int) -> bool:
        if i == n:
            return True
        for v in by_norm.get(ga[i][i], []):
            if all(ip(v, chosen[j]) == ga[i][j] for j in range(i)):
                chosen.append(v)
                if search(i + 1):
                    return True
                chosen.pop()
        return False

    # equal determinants make any such embedding an isometry
    return search(0)


# ---------------------------------------------------------------------------
# forms of factorizations

J = ((0, 1), (-1, 0))


def _m2(a, b):
    return [[a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]]]


def _minus_one(m: SL2):
    return [[m.a - 1, m.b], [m.c, m.d - 1]]


@dataclass(frozen=True)
class FactorizationForm:
    """chi: 2 x 2r integer matrix and q as an upper triangular 2r x 2r matrix."""

    chi: tuple[tuple[int, ...], ...]
    q: tuple[tuple[int, ...], ...]

    @property
    def ambient_rank(self) -> int:
        return len(self.q)

    def qvalue(self, x: Sequence[int]) -> int:
        n = self.ambient_rank
        return sum(x[i] * self.q[i][j] * x[j] for i in range(n) for j in range(i, n))

    def chi_of(self, x: Sequence[int]) -> tuple[int, int]:
        return tuple(sum(row[j] * x[j] for j in range(len(x))) for row in self.chi)

    def polar(self) -> Matrix:
        """The symmetric matrix of q(x+y) - q(x) - q(y)."""
        n = self.ambient_rank
        return [[self.q[i][j] + self.q[j][i] for j in range(n)] for i in range(n)]

    def parity_holds(self) -> bool:
        """q(x+y)-q(x)-q(y) = chi(x).chi(y) mod 2, checked on basis pairs."""
        p = self.polar()
        n = self.ambient_rank
        cols = [[self.chi[0][a], self.chi[1][a]] for a in range(n)]
        for a in range(n):
            for b in range(n):
                u, v = cols[a], cols[b]
                if (p[a][b] - (u[0] * v[1] - u[1] * v[0])) % 2:
                    return False
        return True


def build_form(entries: Sequence[SL2]) -> FactorizationForm:
    r = len(entries)
    n = 2 * r
    chi = [[0] * n for _ in range(2)]
    q = [[0] * n for _ in range(n)]
    minus = [_minus_one(m) for m in entries]
    for i, m in enumerate(entries):
        for a in range(2):
            for b in range(2):
                chi[a][2 * i + b] = minus[i][a][b]
        # -det(x | M x) = -x^T J M x
        jm = _m2(J, [[m.a, m.b], [m.c, m.d]])
        q[2 * i][2 * i] -= jm[0][0]
        q[2 * i][2 * i + 1] -= jm[0][1] + jm[1][0]
        q[2 * i + 1][2 * i + 1] -= jm[1][1]
    for i in range(r):
        for j in range(i + 1, r):
            # x_i^T (M_i - 1)^T J (M_j - 1) x_j
            blk = _m2(_m2(transpose(minus[i]), J), minus[j])
            for a in range(2):
                for b in range(2):
                    q[2 * i + a][2 * j + b] += blk[a][b]
    return FactorizationForm(tuple(map(tuple, chi)), tuple(map(tuple, q)))


def _entries(f) -> list[SL2]:
    from .factorization import SL2_TAG, Factorization, TagMismatch
    if isinstance(f, Factorization):
        if f.group != SL2_TAG:
            raise TagMismatch(f"lattices need an sl2 factorization, got {f.group}")
        return list(f.entries)
    return list(f)


def kernel_gram(form: FactorizationForm) -> tuple[Matrix, Matrix]:
    """(K, G): a basis K of ker chi and the Gram matrix of q on it."""
    n = form.ambient_rank
    if n == 0:
        return [], []
    k = kernel_basis([list(r) for r in form.chi])
    polar = form.polar()
    doubled = mat_mul(mat_mul(k, polar), transpose(k))
    for row in doubled:
        for x in row:
            if x % 2:
                raise ArithmeticError("odd polarization on ker chi; parity lemma fails")
    return k, [[x // 2 for x in row] for row in doubled]


def transcendental_lattice(f) -> IntLattice:
    """ker chi modulo the radical of q, as a reduced Gram matrix.

    The form comes out negative definite in the examples; it is returned with
    the sign flipped so that the result is positive definite when possible.
    """
    form = build_form(_entries(f))
    _, g = kernel_gram(form)
    lat = _quotient_radical(g)
    if lat.rank and not lat.is_positive_definite():
        neg = IntLattice([[-x for x in row] for row in lat.gram])
        if neg.is_positive_definite():
            lat = neg
        else:
            return lat
    return reduce(lat)


def _quotient_radical(g: Matrix) -> IntLattice:
    m = len(g)
    if m == 0:
        return IntLattice(())
    _, d, v = smith_form(g)
    rank = sum(1 for i in range(m) if d[i][i])
    p = transpose(v)
    h = mat_mul(mat_mul(p, g), v)
    return IntLattice([row[:rank] for row in h[:rank]])


def radical_rank(f) -> int:
    form = build_form(_entries(f))
    _, g = kernel_gram(form)
    if not g:
        return 0
    return len(g) - len([1 for x in _smith_diag(g) if x])


def _smith_diag(g):
    _, d, _ = smith_form(g)
    return [d[i][i] for i in range(min(len(d), len(d[0])))]


def complement_lattice(v: Sequence[int]) -> IntLattice:
    """Orthogonal complement of v in Z^n with the identity form."""
    k = kernel_basis([list(v)])
    return reduce(IntLattice(mat_mul(k, transpose(k)))) if k else IntLattice(())


# ---------------------------------------------------------------------------
# colorings

def colored_lattice(entries: Sequence[Gamma], signs: Sequence[int]) -> IntLattice:
    """Transcendental lattice of the lift sign_i * (trace 2 lift of entry i)."""
    if len(signs) != len(entries):
        raise ValueError("coloring length differs from the factorization")
    mats = []
    for g, s in zip(entries, signs):
        if not is_simple(g):
            raise NotSimple(f"{g} is not conjugate to XY")
        m, _ = lift_simple(g)
        mats.append(m if s > 0 else -m)
    return transcendental_lattice(mats)


def coloring_fingerprints(f) -> list[str]:
    """Sorted fingerprints over the colorings with exactly one -1."""
    entries = list(f.project().entries)
    out = []
    for i in range(len(entries)):
        signs = [1] * len(entries)
        signs[i] = -1
        lat = colored_lattice(entries, signs)
        out.append(lat.fingerprint() if lat.rank <= 8 else f"{lat.rank}|{lat.det}")
    return sorted(out)


# ---------------------------------------------------------------------------
# Hurwitz transition maps

def transition_matrix(entries: Sequence[SL2], i: int) -> Matrix:
    """Change of variables for the inverse move at positions (i, i+1), 1-based.

    With f' = (..., M_{i+1}, M_{i+1} M_i M_{i+1}^-1, ...), the returned matrix
    P maps coordinates x' of f' to x = P x' of f, and satisfies
    chi_f(P x') = chi_f'(x') and q_f(P x') = q_f'(x').
    """
    r = len(entries)
    n = 2 * r
    p = identity(n)
    a, b = entries[i - 1], entries[i]
    binv = b.inverse()
    bi = [[binv.a, binv.b], [binv.c, binv.d]]
    corr = _m2(_minus_one(a), bi)
    s, t = 2 * (i - 1), 2 * i
    for u in range(2):
        for w in range(2):
            # x_i = M_{i+1}^-1 x'_{i+1}
            p[s + u][s + w] = 0
            p[s + u][t + w] = bi[u][w]
            # x_{i+1} = x'_i + (M_i - 1) M_{i+1}^-1 x'_{i+1}
            p[t + u][s + w] = int(u == w)
            p[t + u][t + w] = corr[u][w]
    return p


def inverse_move(entries: Sequence[SL2], i: int) -> list[SL2]:
    e = list(entries)
    a, b = e[i - 1], e[i]
    e[i - 1], e[i] = b, b * a * b.inverse()
    return e


def fingerprint_digest(lat: IntLattice) -> str:
    return hashlib.sha256(lat.fingerprint().encode()).hexdigest()[:12]
