"""Exact integer matrix routines on nested tuples of Python ints.

Lattices are column spans: the lattice of ``M`` is ``M @ Z^n``.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if any(len(r) != len(m) for r in m):
        raise ValueError("square matrix expected")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a: Matrix, v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def det(a: Matrix) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
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
    return sign * m[-1][-1]


def is_diagonal(a: Matrix) -> bool:
    return all(x == 0 for i, row in enumerate(a) for j, x in enumerate(row) if i != j)


def inverse(a: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    """Exact rational inverse by Gauss-Jordan elimination."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def contains_lattice(outer: Matrix, inner: Matrix) -> bool:
    """Whether ``inner @ Z^n`` lies inside ``outer @ Z^n``."""
    prod = matmul_frac(inverse(outer), inner)
    return all(x.denominator == 1 for row in prod for x in row)


def matmul_frac(a, b):
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def hermite_lower(a: Matrix) -> Matrix:
    """Column Hermite normal form of a nonsingular matrix.

    Returns ``H`` lower triangular with the same column lattice, positive
    diagonal, and ``0 <= H[i][j] < H[i][i]`` for ``j < i``.
    """
    n = len(a)
    cols = [list(c) for c in zip(*a)]
    for i in range(n):
        # gcd-combine entries of row i in columns i..n-1 into column i
        for j in range(i + 1, n):
            x, y = cols[i][i], cols[j][i]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            ci, cj = cols[i], cols[j]
            cols[i] = [s * u + t * v for u, v in zip(ci, cj)]
            cols[j] = [(x // g) * v - (y // g) * u for u, v in zip(ci, cj)]
        if cols[i][i] == 0:
            raise ValueError("singular matrix has no full-rank Hermite form")
        if cols[i][i] < 0:
            cols[i] = [-u for u in cols[i]]
    for i in range(n):
        for j in range(i):
            q = cols[j][i] // cols[i][i]
            if q:
                cols[j] = [u - q * v for u, v in zip(cols[j], cols[i])]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def reduce_mod_hermite(v: Sequence[int], h: Matrix) -> tuple[int, ...]:
    """Canonical representative of ``v`` modulo the column lattice of ``h``.

    ``h`` must be in the form produced by :func:`hermite_lower`; the result has
    ``0 <= r[i] < h[i][i]``.
    """
    r = list(v)
    n = len(h)
    for i in range(n):
        q = r[i] // h[i][i]
        if q:
            for k in range(i, n):
                r[k] -= q * h[k][i]
    return tuple(r)


def smith_invariants(a: Matrix) -> list[int]:
    """Invariant factors ``d_1 | d_2 | ... | d_n`` of a nonsingular matrix.

    Unit factors are kept, so the list always has ``n`` entries.
    """
    m = [list(r) for r in a]
    n = len(m)
    out = []
    for t in range(n):
        while True:
            piv = min(
                ((abs(m[i][j]), i, j) for i in range(t, n) for j in range(t, n) if m[i][j]),
                default=None,
            )
            if piv is None:
                raise ValueError("singular matrix")
            _, pi, pj = piv
            m[t], m[pi] = m[pi], m[t]
            for row in m:
                row[t], row[pj] = row[pj], row[t]
            p = m[t][t]
            done = True
            for i in range(t + 1, n):
                q = m[i][t] // p
                if q:
                    m[i] = [x - q * y for x, y in zip(m[i], m[t])]
                if m[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = m[t][j] // p
                if q:
                    for row in m:
                        row[j] -= q * row[t]
                if m[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, n) for j in range(t + 1, n) if m[i][j] % p),
                None,
            )
            if bad is None:
                break
            m[t] = [x + y for x, y in zip(m[t], m[bad[0]])]
        out.append(abs(m[t][t]))
    return out


def determinantal_divisors(a: Matrix) -> list[int]:
    """``g_k`` = gcd of all k-by-k minors, for k = 1..n (brute force)."""
    from itertools import combinations

    n = len(a)
    out = []
    for k in range(1, n + 1):
        g = 0
        for rows in combinations(range(n), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det(tuple(tuple(a[i][j] for j in cols) for i in rows)))
        out.append(g)
    return out
