"""Dense exact-rational matrices as plain lists of Fraction rows.

Small sizes only (at most a few thousand rows); rank uses fraction-free
Bareiss elimination on denominator-cleared integer rows, solving uses
straight Gauss-Jordan over Fraction.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

Matrix = list


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def transpose(m: Matrix) -> Matrix:
    return [list(row) for row in zip(*m)] if m else []


def madd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def msub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mneg(a: Matrix) -> Matrix:
    return [[-x for x in row] for row in a]


def mscale(a: Matrix, c) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            aik = ai[k]
            if not aik:
                continue
            bk = b[k]
            for j in range(cols):
                if bk[j]:
                    oi[j] += aik * bk[j]
    return out


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return msub(matmul(a, b), matmul(b, a))


def anticommutator(a: Matrix, b: Matrix) -> Matrix:
    return madd(matmul(a, b), matmul(b, a))


def apply(m: Matrix, vec) -> list:
    out = []
    for row in m:
        acc = Fraction(0)
        for x, v in zip(row, vec):
            if x and v:
                acc += x * v
        out.append(acc)
    return out


def is_zero_matrix(m: Matrix) -> bool:
    return all(not x for row in m for x in row)


def from_columns(cols) -> Matrix:
    return [list(row) for row in zip(*cols)] if cols else []


def _integer_rows(m: Matrix) -> list[list[int]]:
    out = []
    for row in m:
        scale = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * scale) for x in row])
    return out


def rank(m: Matrix) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    if not m or not m[0]:
        return 0
    a = _integer_rows(m)
    rows, cols = len(a), len(a[0])
    r = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pivot = a[r][c]
        for i in range(r + 1, rows):
            aic = a[i][c]
            for j in range(c + 1, cols):
                a[i][j] = (a[i][j] * pivot - aic * a[r][j]) // prev
            a[i][c] = 0
        prev = pivot
        r += 1
        if r == rows:
            break
    return r


def solve(a: Matrix, b) -> tuple[list, list[list]] | None:
    """Solve a x = b exactly.

    Returns (particular solution, nullspace basis) or None when the system
    is inconsistent.  Free variables are set to zero in the particular
    solution.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [list(a[i]) + [Fraction(b[i])] for i in range(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rows):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    for i in range(r, rows):
        if aug[i][cols]:
            return None
    particular = [Fraction(0)] * cols
    for row_idx, c in enumerate(pivots):
        particular[c] = aug[row_idx][cols]
    free = [c for c in range(cols) if c not in pivots]
    nullspace = []
    for f in free:
        vec = [Fraction(0)] * cols
        vec[f] = Fraction(1)
        for row_idx, c in enumerate(pivots):
            vec[c] = -aug[row_idx][f]
        nullspace.append(vec)
    return particular, nullspace
