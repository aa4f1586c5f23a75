"""Small dense linear algebra over the rationals (lists of lists of Fraction)."""

from __future__ import annotations

from fractions import Fraction


def as_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def zeros(n, m=None):
    m = n if m is None else m
    return [[Fraction(0)] * m for _ in range(n)]


def identity(n):
    out = zeros(n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a):
    return [list(col) for col in zip(*a)] if a else []


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matadd(a, b, s=1):
    return [[x + s * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def _echelon(a):
    """Row-reduce a copy of ``a``; return (rref, pivot columns, det factor)."""
    m = [[Fraction(x) for x in r] for r in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    det = Fraction(1)
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c]), None)
        if p is None:
            det = Fraction(0)
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            det = -det
        piv = m[r][c]
        det *= piv
        m[r] = [x / piv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if r < rows:
        det = Fraction(0)
    return m, pivots, det


def det(a) -> Fraction:
    if not a:
        return Fraction(1)
    if len(a) != len(a[0]):
        raise ValueError("determinant of a non-square matrix")
    return _echelon(a)[2]


def rank(a) -> int:
    if not a:
        return 0
    return len(_echelon(a)[1])


def inverse(a):
    n = len(a)
    aug = [list(row) + e for row, e in zip(a, identity(n))]
    m, pivots, _ = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in m]


def nullspace(a, ncols=None):
    """Basis of {x : a x = 0} as a list of vectors."""
    if not a:
        n = ncols or 0
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    n = len(a[0])
    m, pivots, _ = _echelon(a)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(m, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(a, b):
    """One solution x of a x = b, or None if inconsistent."""
    n = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    m, pivots, _ = _echelon(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(m, pivots):
        x[pc] = row[n]
    return x
