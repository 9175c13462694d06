"""Exact integer matrix routines: Smith invariants, integer kernels, LLL."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]

__all__ = ["smith_invariants", "smith_form", "kernel_basis", "row_hnf",
           "mat_mul", "transpose", "det", "lll_gram", "identity"]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(r) for r in zip(*a)] if a else []


def mat_mul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U A V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in m:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, c):
        # row dst += c * row src
        m[dst] = [x + c * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for r in m:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    t = 0
    while t < min(rows, cols):
        while True:
            # pivot: smallest nonzero entry of the remaining block
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return u, m, v
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = m[t][t]
            for i in range(t + 1, rows):
                if m[i][t]:
                    add_row(i, t, -(m[i][t] // p))
            for j in range(t + 1, cols):
                if m[t][j]:
                    add_col(j, t, -(m[t][j] // p))
            if any(m[i][t] for i in range(t + 1, rows)) or any(m[t][j] for j in range(t + 1, cols)):
                continue
            # divisibility of the rest of the block
            bad = next((i for i in range(t + 1, rows)
                        if any(m[i][j] % p for j in range(t + 1, cols))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, m, v


def smith_invariants(a: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith form."""
    if not a or not a[0]:
        return []
    _, d, _ = smith_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]))) if d[i][i]]


def kernel_basis(a: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """A basis (as rows) of the saturated integer kernel {x : A x = 0}."""
    cols = len(a[0]) if a else (ncols or 0)
    if not a:
        return identity(cols)
    _, d, v = smith_form(a)
    rank = sum(1 for i in range(min(len(d), cols)) if d[i][i])
    return [[v[r][j] for r in range(cols)] for j in range(rank, cols)]


def row_hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form of the row lattice (zero rows dropped)."""
    m = [list(r) for r in rows]
    if not m:
        return []
    cols = len(m[0])
    r0 = 0
    for c in range(cols):
        piv = [i for i in range(r0, len(m)) if m[i][c]]
        if not piv:
            continue
        while True:
            piv = [i for i in range(r0, len(m)) if m[i][c]]
            p = min(piv, key=lambda i: abs(m[i][c]))
            m[r0], m[p] = m[p], m[r0]
            others = [i for i in range(r0 + 1, len(m)) if m[i][c]]
            if not others:
                break
            for i in others:
                q = m[i][c] // m[r0][c]
                m[i] = [x - q * y for x, y in zip(m[i], m[r0])]
        if m[r0][c] < 0:
            m[r0] = [-x for x in m[r0]]
        for i in range(r0):
            q = m[i][c] // m[r0][c]
            m[i] = [x - q * y for x, y in zip(m[i], m[r0])]
        r0 += 1
    return m[:r0]


def lll_gram(gram: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> tuple[Matrix, Matrix]:
    """LLL-reduce a positive definite Gram matrix; return (reduced Gram, basis change B).

    The rows of B express the new basis in the old one: G' = B G B^T.
    """
    n = len(gram)
    g0 = [list(map(int, r)) for r in gram]
    b = identity(n)
    if n == 0:
        return [], []

    def gso():
        g = mat_mul(mat_mul(b, g0), transpose(b))
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                s = Fraction(g[i][j])
                for k in range(j):
                    s -= mu[j][k] * mu[i][k] * bstar[k]
                mu[i][j] = s / bstar[j]
            s = Fraction(g[i][i])
            for k in range(i):
                s -= mu[i][k] ** 2 * bstar[k]
            if s <= 0:
                raise ValueError("Gram matrix is not positive definite")
            bstar[i] = s
        return mu, bstar

    k = 1
    mu, bstar = gso()
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                b[k] = [x - q * y for x, y in zip(b[k], b[j])]
                mu, bstar = gso()
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            mu, bstar = gso()
            k = max(k - 1, 1)
    return mat_mul(mat_mul(b, g0), transpose(b)), b
