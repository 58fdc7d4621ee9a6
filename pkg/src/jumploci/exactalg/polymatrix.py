"""Matrices with polynomial entries: minors, pointwise and generic ranks."""

from __future__ import annotations

import random
from itertools import combinations
from operator import sub

from . import config as _config
from .groebner import Ideal
from .linalg import rank as rational_rank
from .poly import GREVLEX, MultiPoly, default_names
from .rational import qq


def exact_divide(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """``p / q`` when ``q`` divides ``p``; raises ``ArithmeticError`` otherwise."""
    if q.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    key = GREVLEX.desc_key
    lq, cq = q.leading(GREVLEX)
    rem = dict(p.terms)
    quot = {}
    while rem:
        e = min(rem, key=key)
        c = rem[e]
        shift = tuple(map(sub, e, lq))
        if any(x < 0 for x in shift):
            raise ArithmeticError("inexact polynomial division")
        f = c / cq
        quot[shift] = f
        for qe, qc in q.terms.items():
            ne = tuple(a + b for a, b in zip(qe, shift))
            v = rem.get(ne, 0) - f * qc
            if v:
                rem[ne] = v
            else:
                rem.pop(ne, None)
    return MultiPoly._raw(quot, p.nvars, p.names)


class PolyMatrix:
    """A rectangular matrix over ℚ[t_1..t_n]; rows x cols of :class:`MultiPoly`."""

    __slots__ = ("rows", "nrows", "ncols", "nvars", "names")

    def __init__(self, rows, nvars: int | None = None, names=None, ncols: int | None = None):
        rows = [list(r) for r in rows]
        if nvars is None:
            for r in rows:
                for x in r:
                    if isinstance(x, MultiPoly):
                        nvars, names = x.nvars, x.names
                        break
                if nvars is not None:
                    break
        if nvars is None:
            raise ValueError("cannot infer the polynomial ring")
        names = tuple(names) if names else default_names(nvars)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        conv = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("matrix is not rectangular")
            conv.append([
                x.with_names(names) if isinstance(x, MultiPoly) else MultiPoly.const(qq(x), nvars, names)
                for x in r
            ])
        for r in conv:
            for x in r:
                if x.nvars != nvars:
                    raise ValueError("entries live in different rings")
        self.rows = conv
        self.nrows = len(conv)
        self.ncols = ncols
        self.nvars = nvars
        self.names = names

    @classmethod
    def zeros(cls, nrows: int, ncols: int, nvars: int, names=None) -> "PolyMatrix":
        z = MultiPoly.zero(nvars, names)
        return cls([[z] * ncols for _ in range(nrows)], nvars, names, ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def shape(self):
        return self.nrows, self.ncols

    def evaluate(self, point):
        return [[x.evaluate(point) for x in r] for r in self.rows]

    def is_zero(self) -> bool:
        return all(x.is_zero() for r in self.rows for x in r)

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch in matrix product")
        zero = MultiPoly.zero(self.nvars, self.names)
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = zero
                for k in range(self.ncols):
                    a = self.rows[i][k]
                    if a:
                        b = other.rows[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out, self.nvars, self.names, other.ncols)

    def columns(self, cols) -> "PolyMatrix":
        return PolyMatrix([[r[c] for c in cols] for r in self.rows], self.nvars, self.names, len(cols))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
            self.nvars, self.names, self.nrows,
        )

    def substitute(self, images) -> "PolyMatrix":
        images = list(images)
        target = images[0]
        return PolyMatrix(
            [[x.substitute(images) for x in r] for r in self.rows],
            target.nvars, target.names, self.ncols,
        )

    def max_entry_degree(self) -> int:
        return max((x.total_degree() for r in self.rows for x in r), default=-1)

    def minors(self, k: int):
        """Yield every nonzero ``k x k`` minor (rows and columns in lexicographic order)."""
        if k <= 0 or k > min(self.nrows, self.ncols):
            return
        deadline = _config.Deadline(f"{k}-minors of a {self.nrows}x{self.ncols} matrix")
        cache: dict = {}

        def det(rows, cols):
            if len(rows) == 1:
                return self.rows[rows[0]][cols[0]]
            keyrc = (rows, cols)
            if keyrc in cache:
                return cache[keyrc]
            c0 = cols[0]
            rest = cols[1:]
            total = MultiPoly.zero(self.nvars, self.names)
            for pos, r in enumerate(rows):
                a = self.rows[r][c0]
                if not a:
                    continue
                sub_det = det(rows[:pos] + rows[pos + 1:], rest)
                if not sub_det:
                    continue
                term = a * sub_det
                total = total - term if pos % 2 else total + term
            cache[keyrc] = total
            return total

        for cols in combinations(range(self.ncols), k):
            for rows in combinations(range(self.nrows), k):
                m = det(rows, cols)
                if m:
                    yield m
            deadline.check()


def minors_ideal(M: PolyMatrix, k: int) -> Ideal:
    """Ideal of all ``k x k`` minors; ``k = 0`` gives (1), ``k > min(rows, cols)`` gives (0)."""
    if k < 0:
        raise ValueError("minor size must be nonnegative")
    if k == 0:
        return Ideal.unit(M.nvars, M.names)
    if k > min(M.nrows, M.ncols):
        return Ideal.zero(M.nvars, M.names)
    return Ideal(list(M.minors(k)), M.nvars, M.names)


def rank_at(M: PolyMatrix, point) -> int:
    if len(point) != M.nvars:
        raise ValueError("point has wrong length")
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return rational_rank(M.evaluate(point))


def fraction_free_echelon(M: PolyMatrix):
    """Bareiss elimination over ℚ[t]; returns ``(echelon rows, pivot columns)``.

    Every entry stays a polynomial (divisions are exact), and the number of
    pivots is the rank over the fraction field.
    """
    A = [list(r) for r in M.rows]
    m, n = M.nrows, M.ncols
    one = MultiPoly.const(1, M.nvars, M.names)
    prev = one
    r = 0
    pivots = []
    deadline = _config.Deadline(f"fraction-free elimination of a {m}x{n} matrix")
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
                val = p * row[j] - f * top[j]
                row[j] = exact_divide(val, prev) if prev != one else val
            row[c] = MultiPoly.zero(M.nvars, M.names)
        deadline.check()
        prev = p
        pivots.append(c)
        r += 1
        if r == m:
            break
    return A[:r], pivots


def generic_rank(M: PolyMatrix, samples: int = 8) -> int:
    """Rank over the fraction field.

    Seeded random evaluations give a lower bound; when it already equals
    ``min(rows, cols)`` it is certified, otherwise fraction-free symbolic
    elimination decides.
    """
    if M.nrows == 0 or M.ncols == 0:
        return 0
    cap = min(M.nrows, M.ncols)
    rng = random.Random(_config.current().seed)
    lower = 0
    for _ in range(samples):
        pt = [qq(rng.randint(-97, 97)) for _ in range(M.nvars)]
        lower = max(lower, rank_at(M, pt))
        if lower == cap:
            return cap
    _, pivots = fraction_free_echelon(M)
    if len(pivots) < lower:
        raise AssertionError("symbolic rank below an evaluated rank")
    return len(pivots)


def kernel_basis(M: PolyMatrix):
    """Polynomial vectors spanning the kernel of ``M`` over the fraction field."""
    U, pivots = fraction_free_echelon(M)
    n = M.ncols
    zero = MultiPoly.zero(M.nvars, M.names)
    one = MultiPoly.const(1, M.nvars, M.names)
    basis = []
    for f in (c for c in range(n) if c not in pivots):
        v = [zero] * n
        v[f] = one
        for k in range(len(pivots) - 1, -1, -1):
            pc = pivots[k]
            row = U[k]
            acc = zero
            for c in range(pc + 1, n):
                if row[c] and v[c]:
                    acc = acc + row[c] * v[c]
            # scale so that the pivot equation stays polynomial: p*v_pc = -acc
            p = row[pc]
            v = [x * p for x in v]
            v[pc] = -acc
        basis.append(v)
    return basis
