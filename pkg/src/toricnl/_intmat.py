"""Exact integer matrix routines: Smith normal form, rank over Q, determinants.

Matrices are plain lists of lists of Python ints so that nothing ever overflows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return [[int(x) for x in row] for row in rows]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(S, U, V)`` with ``U @ a @ V == S`` and ``S`` diagonal.

    ``U`` and ``V`` are unimodular; the diagonal entries are non-negative and
    each divides the next.
    """
    s = as_matrix(a)
    m = len(s)
    n = len(s[0]) if m else 0
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row[dst] += k * row[src]
        s[dst] = [x + k * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for row in s:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(s[i][j]), i, j) for i in range(t, m) for j in range(t, n) if s[i][j]]
        if not nonzero:
            break
        _, i0, j0 = min(nonzero)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            done = True
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(t, i, -(s[i][t] // s[t][t]))
                    if s[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(t, j, -(s[t][j] // s[t][t]))
                    if s[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if s[i][j] % s[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return s, u, v


def rank(a: Sequence[Sequence[int]]) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    m = [list(map(int, row)) for row in a]
    if not m or not m[0]:
        return 0
    rows, cols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == rows:
            break
    return r


def det(a: Sequence[Sequence[int | Fraction]]):
    """Exact determinant over Q (Gaussian elimination on Fractions)."""
    m = [[Fraction(x) for x in row] for row in a]
    n = len(m)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    out *= sign
    return int(out) if out.denominator == 1 else out


def det3(a, b, c):
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def solve3(rows, rhs) -> tuple[Fraction, Fraction, Fraction] | None:
    """Solve the 3x3 system ``rows @ x = rhs`` exactly; None when singular."""
    d = det3(*rows)
    if d == 0:
        return None
    out = []
    for k in range(3):
        cols = [list(r) for r in rows]
        for i in range(3):
            cols[i][k] = rhs[i]
        out.append(Fraction(det3(*cols), d))
    return tuple(out)
