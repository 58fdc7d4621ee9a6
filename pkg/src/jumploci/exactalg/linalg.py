"""Exact linear algebra over the rationals.

Ranks and determinants go through fraction-free (Bareiss) elimination on
integer matrices obtained by clearing row denominators; echelon forms and
kernels use plain Gauss-Jordan over ``mpq``.
"""

from __future__ import annotations

from math import lcm

from .rational import ONE, ZERO, qq


def as_matrix(rows, ncols: int | None = None):
    out = [[qq(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(out[0]) if out else 0
    if any(len(r) != ncols for r in out):
        raise ValueError("matrix is not rectangular")
    return out


def zeros(m: int, n: int):
    return [[ZERO] * n for _ in range(m)]


def identity(n: int):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def transpose(M, ncols: int | None = None):
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    ncols = len(B[0]) if B else 0
    return [
        [sum((A[i][k] * B[k][j] for k in range(inner) if A[i][k]), ZERO) for j in range(ncols)]
        for i in range(len(A))
    ]


def matvec(A, v):
    return [sum((a * x for a, x in zip(row, v) if a and x), ZERO) for row in A]


def is_zero_matrix(M) -> bool:
    return all(not x for row in M for x in row)


def _integer_rows(M):
    rows = []
    for row in M:
        den = 1
        for x in row:
            den = lcm(den, x.denominator)
        rows.append([int(x * den) for x in row])
    return rows


def bareiss_rank(A) -> int:
    """Rank of an integer matrix by fraction-free elimination (copies input)."""
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    prev = 1
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        p = A[r][c]
        top = A[r]
        for i in range(r + 1, m):
            row = A[i]
            f = row[c]
            for j in range(c + 1, n):
                row[j] = (p * row[j] - f * top[j]) // prev
            row[c] = 0
        prev = p
        r += 1
        if r == m:
            break
    return r


def bareiss_det(A) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    A = [list(r) for r in A]
    n = len(A)
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not A[k][k]:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        p = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (p * A[i][j] - A[i][k] * A[k][j]) // prev
        prev = p
    return sign * A[n - 1][n - 1] if n else 1


def rank(M) -> int:
    if not M or not M[0]:
        return 0
    return bareiss_rank(_integer_rows(as_matrix(M)))


def det(M):
    M = as_matrix(M)
    den = 1
    rows = []
    for row in M:
        d = 1
        for x in row:
            d = lcm(d, x.denominator)
        den *= d
        rows.append([int(x * d) for x in row])
    return qq(bareiss_det(rows)) / den


def rref(M):
    """Reduced row echelon form; returns ``(R, pivot_columns)`` with zero rows dropped."""
    R = [list(r) for r in M]
    m = len(R)
    n = len(R[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        top = R[r]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], top)]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R[:r], pivots


def nullspace(M, ncols: int | None = None):
    """Basis of ``{v : M v = 0}``, one vector per free column, in column order."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    if not M:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(M)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, p in zip(R, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def row_basis(vectors, ncols: int):
    """Reduced echelon basis of the span of ``vectors``."""
    if not vectors:
        return []
    R, _ = rref([list(v) for v in vectors])
    return R


def in_span(basis, v) -> bool:
    if not any(v):
        return True
    if not basis:
        return False
    return rank(basis + [list(v)]) == rank(basis)


def coordinates(basis, v):
    """Coefficients ``c`` with ``sum c_i basis_i = v``; raises if ``v`` is outside the span."""
    k = len(basis)
    n = len(v)
    # solve B^T c = v
    aug = [[basis[i][j] for i in range(k)] + [v[j]] for j in range(n)]
    R, pivots = rref(aug)
    if k in pivots:
        raise ValueError("vector is not in the span")
    c = [ZERO] * k
    for row, p in zip(R, pivots):
        c[p] = row[k]
    return c
