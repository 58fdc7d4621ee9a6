"""Finite truncated commutative differential graded algebras.

A :class:`CDGA` stores, for degrees ``0..N``, a labelled basis, a sparse
multiplication table and the differential matrices.  Products are input on
ordered basis pairs only; the graded-commutative completion and the unit
products are derived.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product as iproduct
from pathlib import Path

from .exactalg.linalg import matmul, nullspace, rank, row_basis, in_span
from .exactalg.rational import ONE, ZERO, qq, to_str


class CDGAFormatError(ValueError):
    """Structurally malformed algebra data (dimensions, indices, degrees)."""


class CDGAValidationError(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(str(v) for v in report.violations[:5]))


AXIOMS = (
    "connected",
    "d0-zero",
    "differential-degree",
    "product-degree",
    "d-squared",
    "leibniz",
    "graded-commutativity",
    "unitality",
    "associativity",
    "weight-mu",
    "weight-d",
    "weight-positive",
)


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: str

    def __str__(self):
        return f"{self.axiom}: {self.witness}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> set[str]:
        return {v.axiom for v in self.violations}

    def to_json(self) -> dict:
        return {
            "status": "pass" if self.ok else "fail",
            "violations": [{"axiom": v.axiom, "witness": v.witness} for v in self.violations],
        }


@dataclass(frozen=True)
class CohomologyReport:
    degree: int
    dimension: int
    basis: tuple

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "dimension": self.dimension,
            "basis": [[to_str(x) for x in v] for v in self.basis],
        }


def _vec_add(acc: dict, vec: dict, scale=ONE):
    for k, c in vec.items():
        v = acc.get(k, ZERO) + scale * c
        if v:
            acc[k] = v
        else:
            acc.pop(k, None)


class CDGA:
    """A connected finite CDGA truncated at degree ``N``.

    ``mu`` maps ``(i, a, j, b)`` to a sparse vector ``{k: coeff}`` in degree
    ``i + j``; ``d[i]`` is the ``dims[i+1] x dims[i]`` matrix of ``d: A^i -> A^{i+1}``.
    """

    def __init__(self, truncation: int, basis, mu=None, d=None, weights=None,
                 bad_d=(), bad_mu=()):
        if truncation < 0:
            raise CDGAFormatError("truncation must be nonnegative")
        if len(basis) != truncation + 1:
            raise CDGAFormatError(
                f"basis lists {len(basis)} degrees, expected {truncation + 1}"
            )
        self.N = truncation
        self.basis = tuple(tuple(str(x) for x in labels) for labels in basis)
        self.dims = tuple(len(b) for b in self.basis)
        self.mu = {}
        for key, vec in (mu or {}).items():
            i, a, j, b = key
            self._check_index(i, a)
            self._check_index(j, b)
            if i + j > self.N:
                raise CDGAFormatError(f"product of degrees {i} and {j} exceeds truncation")
            clean = {}
            for k, c in vec.items():
                self._check_index(i + j, k)
                c = qq(c)
                if c:
                    clean[k] = c
            if clean:
                self.mu[(i, a, j, b)] = clean
        if d is None:
            d = [[[ZERO] * self.dims[i] for _ in range(self.dims[i + 1])] for i in range(self.N)]
        if len(d) != self.N:
            raise CDGAFormatError(f"expected {self.N} differential matrices, got {len(d)}")
        self.d = []
        for i, M in enumerate(d):
            if len(M) != self.dims[i + 1] or any(len(r) != self.dims[i] for r in M):
                raise CDGAFormatError(f"d_{i} must be {self.dims[i + 1]}x{self.dims[i]}")
            self.d.append(tuple(tuple(qq(x) for x in r) for r in M))
        self.d = tuple(self.d)
        if weights is not None:
            if len(weights) != self.N + 1 or any(
                len(w) != n for w, n in zip(weights, self.dims)
            ):
                raise CDGAFormatError("weights must match the basis shape")
            weights = tuple(tuple(int(x) for x in w) for w in weights)
        self.weights = weights
        # entries that could not be placed (wrong target degree); kept for validate
        self.bad_d = tuple(bad_d)
        self.bad_mu = tuple(bad_mu)
        self._cache: dict = {}

    def _check_index(self, deg: int, idx: int):
        if not 0 <= deg <= self.N:
            raise CDGAFormatError(f"degree {deg} out of range 0..{self.N}")
        if not 0 <= idx < self.dims[deg]:
            raise CDGAFormatError(f"index {idx} out of range in degree {deg}")

    # --- structure ------------------------------------------------------
    def label(self, deg: int, idx: int) -> str:
        return self.basis[deg][idx]

    def product(self, i: int, a: int, j: int, b: int) -> dict:
        """``x^i_a · x^j_b`` as a sparse vector in degree ``i + j``."""
        if i + j > self.N:
            raise ValueError("product beyond truncation")
        given = self.mu.get((i, a, j, b))
        if given is not None:
            return dict(given)
        if i == 0 and a == 0:
            return {b: ONE}
        if j == 0 and b == 0:
            return {a: ONE}
        swapped = self.mu.get((j, b, i, a))
        if swapped is not None and (i, a) != (j, b):
            sign = -1 if (i * j) % 2 else 1
            return {k: sign * c for k, c in swapped.items()}
        return {}

    def multiply(self, i: int, u, j: int, v) -> list:
        """Product of dense vectors ``u`` in degree ``i`` and ``v`` in degree ``j``."""
        out = {}
        for a, x in enumerate(u):
            if not x:
                continue
            for b, y in enumerate(v):
                if y:
                    _vec_add(out, self.product(i, a, j, b), x * y)
        return self._dense(out, i + j)

    def _dense(self, vec: dict, deg: int) -> list:
        out = [ZERO] * self.dims[deg]
        for k, c in vec.items():
            out[k] = c
        return out

    def apply_d(self, i: int, vec) -> list:
        if i >= self.N:
            raise ValueError(f"d_{i} is not defined at truncation {self.N}")
        return [sum((r[k] * x for k, x in enumerate(vec) if x and r[k]), ZERO) for r in self.d[i]]

    def left_multiplication(self, j: int, vec, i: int):
        """Matrix (``dims[i+j] x dims[i]``) of ``x ↦ vec · x`` on degree ``i``."""
        cols = []
        for a in range(self.dims[i]):
            acc = {}
            for b, c in enumerate(vec):
                if c:
                    _vec_add(acc, self.product(j, b, i, a), c)
            cols.append(self._dense(acc, i + j))
        return [[cols[a][k] for a in range(self.dims[i])] for k in range(self.dims[i + j])]

    def unit_vector(self, deg: int, idx: int) -> list:
        v = [ZERO] * self.dims[deg]
        v[idx] = ONE
        return v

    def is_formal_ring(self) -> bool:
        return all(not x for M in self.d for r in M for x in r)

    # --- serialization --------------------------------------------------
    @classmethod
    def from_json(cls, data: dict) -> "CDGA":
        try:
            N = int(data["truncation"])
            basis = data["basis"]
        except (KeyError, TypeError, ValueError) as exc:
            raise CDGAFormatError(f"missing or invalid field: {exc}") from None
        if not isinstance(basis, list) or len(basis) != N + 1:
            raise CDGAFormatError("basis must list one label array per degree 0..truncation")
        dims = [len(b) for b in basis]
        mu: dict = {}
        bad_mu = []
        for entry in data.get("mu", []):
            if len(entry) != 7:
                raise CDGAFormatError(f"mu entry {entry!r} must have 7 fields")
            i, a, j, b, k, c, coeff = entry
            i, a, j, b, k, c = (int(x) for x in (i, a, j, b, k, c))
            if k != i + j:
                bad_mu.append((i, a, j, b, k, c, qq(coeff)))
                continue
            vec = mu.setdefault((i, a, j, b), {})
            vec[c] = vec.get(c, ZERO) + qq(coeff)
        d = [[[ZERO] * dims[i] for _ in range(dims[i + 1])] for i in range(N)]
        bad_d = []
        for entry in data.get("d", []):
            if len(entry) == 4:
                deg, src, dst, coeff = entry
                tdeg = int(deg) + 1
            elif len(entry) == 5:
                deg, src, tdeg, dst, coeff = entry
                tdeg = int(tdeg)
            else:
                raise CDGAFormatError(f"d entry {entry!r} must have 4 or 5 fields")
            deg, src, dst = int(deg), int(src), int(dst)
            if not 0 <= deg < N:
                raise CDGAFormatError(f"d entry {entry!r}: source degree out of range")
            if not 0 <= src < dims[deg]:
                raise CDGAFormatError(f"d entry {entry!r}: source index out of range")
            if tdeg != deg + 1:
                bad_d.append((deg, src, tdeg, dst, qq(coeff)))
                continue
            if not 0 <= dst < dims[deg + 1]:
                raise CDGAFormatError(f"d entry {entry!r}: target index out of range")
            d[deg][dst][src] += qq(coeff)
        return cls(N, basis, mu, d, data.get("weights"), bad_d, bad_mu)

    @classmethod
    def load(cls, path) -> "CDGA":
        with open(Path(path), encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def to_json(self) -> dict:
        mu = []
        for (i, a, j, b), vec in sorted(self.mu.items()):
            for k, c in sorted(vec.items()):
                mu.append([i, a, j, b, i + j, k, to_str(c)])
        d = []
        for i, M in enumerate(self.d):
            for dst, row in enumerate(M):
                for src, c in enumerate(row):
                    if c:
                        d.append([i, src, dst, to_str(c)])
        d.sort()
        out = {"truncation": self.N, "basis": [list(b) for b in self.basis], "mu": mu, "d": d}
        if self.weights is not None:
            out["weights"] = [list(w) for w in self.weights]
        return out

    def __repr__(self):
        return f"CDGA(N={self.N}, dims={self.dims})"


# --- validation -----------------------------------------------------------

def _fmt(A: CDGA, deg: int, idx: int) -> str:
    return f"{A.label(deg, idx)}[{deg}]"


def validate(A: CDGA) -> ValidationReport:
    """Check every CDGA axiom; each violation carries a witnessing basis element or pair."""
    out: list[Violation] = []
    add = lambda axiom, witness: out.append(Violation(axiom, witness))  # noqa: E731

    if A.dims[0] != 1:
        add("connected", f"dim A^0 = {A.dims[0]}")
    if A.N >= 1 and any(x for r in A.d[0] for x in r):
        add("d0-zero", "d(1) != 0")
    for deg, src, tdeg, dst, c in A.bad_d:
        add("differential-degree", f"d({_fmt(A, deg, src)}) has a term in degree {tdeg}")
    for i, a, j, b, k, c, coeff in A.bad_mu:
        add("product-degree", f"{_fmt(A, i, a)}*{_fmt(A, j, b)} has a term in degree {k}")
    if A.dims[0] != 1:
        return ValidationReport(tuple(out))

    # d∘d = 0
    for i in range(A.N - 1):
        if any(x for r in matmul(A.d[i + 1], A.d[i]) for x in r):
            add("d-squared", f"d_{i + 1} d_{i} != 0")

    # unitality and graded commutativity on the given table
    for (i, a, j, b), vec in sorted(A.mu.items()):
        if (i == 0 and a == 0) or (j == 0 and b == 0):
            other = (j, b) if i == 0 and a == 0 else (i, a)
            if vec != {other[1]: ONE}:
                add("unitality", f"1*{_fmt(A, *other)} != {_fmt(A, *other)}")
            continue
        sign = -1 if (i * j) % 2 else 1
        if (i, a) == (j, b):
            if sign == -1:
                add("graded-commutativity", f"{_fmt(A, i, a)}^2 != 0 in odd degree")
            continue
        swapped = A.mu.get((j, b, i, a))
        if swapped is not None and (j, b) > (i, a):
            if {k: sign * c for k, c in vec.items()} != swapped:
                add("graded-commutativity",
                    f"{_fmt(A, i, a)}*{_fmt(A, j, b)} vs {_fmt(A, j, b)}*{_fmt(A, i, a)}")

    # Leibniz: d(ab) = (da)b + (-1)^|a| a(db) for |a|+|b|+1 <= N
    for i in range(A.N):
        for j in range(A.N - i):
            if i + j + 1 > A.N:
                continue
            for a, b in iproduct(range(A.dims[i]), range(A.dims[j])):
                ea, eb = A.unit_vector(i, a), A.unit_vector(j, b)
                lhs = A.apply_d(i + j, A.multiply(i, ea, j, eb))
                rhs = A.multiply(i + 1, A.apply_d(i, ea), j, eb)
                second = A.multiply(i, ea, j + 1, A.apply_d(j, eb))
                sign = -1 if i % 2 else 1
                rhs = [x + sign * y for x, y in zip(rhs, second)]
                if lhs != rhs:
                    add("leibniz", f"d({_fmt(A, i, a)}*{_fmt(A, j, b)})")

    # associativity for |a|+|b|+|c| <= N, positive degrees (unit cases are derived)
    for i in range(1, A.N + 1):
        for j in range(1, A.N + 1 - i):
            for k in range(1, A.N + 1 - i - j):
                for a, b, c in iproduct(range(A.dims[i]), range(A.dims[j]), range(A.dims[k])):
                    ea, eb, ec = A.unit_vector(i, a), A.unit_vector(j, b), A.unit_vector(k, c)
                    left = A.multiply(i + j, A.multiply(i, ea, j, eb), k, ec)
                    right = A.multiply(i, ea, j + k, A.multiply(j, eb, k, ec))
                    if left != right:
                        add("associativity",
                            f"({_fmt(A, i, a)}*{_fmt(A, j, b)})*{_fmt(A, k, c)}")

    if A.weights is not None:
        w = A.weights
        if w[0][0] != 0:
            add("weight-mu", "the unit has nonzero weight")
        for (i, a, j, b), vec in sorted(A.mu.items()):
            for k in vec:
                if w[i + j][k] != w[i][a] + w[j][b]:
                    add("weight-mu",
                        f"{_fmt(A, i, a)}*{_fmt(A, j, b)} -> {_fmt(A, i + j, k)}")
        for i, M in enumerate(A.d):
            for dst, row in enumerate(M):
                for src, c in enumerate(row):
                    if c and w[i + 1][dst] != w[i][src]:
                        add("weight-d", f"d({_fmt(A, i, src)}) -> {_fmt(A, i + 1, dst)}")
        if A.N >= 1:
            for a, x in enumerate(w[1]):
                if x < 1:
                    add("weight-positive", f"{_fmt(A, 1, a)} has weight {x}")

    return ValidationReport(tuple(out))


def require_valid(A: CDGA) -> CDGA:
    report = validate(A)
    if not report.ok:
        raise CDGAValidationError(report)
    return A


# --- cohomology ------------------------------------------------------------

def _d_matrix(A: CDGA, i: int):
    """``d_i`` with the conventions ``d_{-1} = 0``."""
    if i < 0:
        return [[] for _ in range(A.dims[0])]
    return [list(r) for r in A.d[i]]


def cohomology(A: CDGA, i: int) -> CohomologyReport:
    if not 0 <= i < A.N:
        raise ValueError(f"H^{i} needs d_{i}; degree must lie in 0..{A.N - 1}")
    kernel = nullspace(_d_matrix(A, i), A.dims[i])
    image = []
    if i > 0:
        prev = _d_matrix(A, i - 1)
        image = row_basis([list(col) for col in zip(*prev)], A.dims[i]) if prev and prev[0] else []
    reps = []
    span = list(image)
    for v in kernel:
        if not in_span(span, v):
            reps.append(tuple(v))
            span.append(list(v))
    rk_i = rank(A.d[i]) if A.dims[i] and A.dims[i + 1] else 0
    rk_prev = rank(A.d[i - 1]) if i > 0 and A.dims[i - 1] and A.dims[i] else 0
    dim = A.dims[i] - rk_i - rk_prev
    if dim != len(reps):
        raise AssertionError("rank-nullity mismatch in cohomology computation")
    return CohomologyReport(i, dim, tuple(reps))


def h1_cocycles(A: CDGA) -> list:
    """Reduced echelon basis of ``Z^1 = ker d_1`` (equal to ``H^1`` since ``d_0 = 0``)."""
    if A.N < 2:
        raise ValueError("degree-one cocycles need truncation >= 2")
    if "h1" not in A._cache:
        kernel = nullspace(_d_matrix(A, 1), A.dims[1])
        A._cache["h1"] = tuple(tuple(v) for v in row_basis(kernel, A.dims[1]))
    return [list(v) for v in A._cache["h1"]]


# --- constructions ----------------------------------------------------------

def formal_from_ring(ring) -> CDGA:
    """The ring with zero differential and weight equal to degree.

    ``ring`` is either a JSON-like dict (``truncation``, ``basis``, ``mu``)
    or a :class:`CDGA` whose differential is ignored.
    """
    if isinstance(ring, CDGA):
        base = ring
    else:
        data = {k: v for k, v in ring.items() if k not in ("d", "weights")}
        base = CDGA.from_json(data)
    weights = [[deg] * n for deg, n in enumerate(base.dims)]
    A = CDGA(base.N, base.basis, base.mu, None, weights)
    return require_valid(A)


def truncate(A: CDGA, q: int) -> CDGA:
    if not 0 <= q <= A.N:
        raise ValueError(f"cannot truncate at {q}: truncation is {A.N}")
    mu = {k: v for k, v in A.mu.items() if k[0] + k[2] <= q}
    weights = A.weights[: q + 1] if A.weights is not None else None
    bad_d = [e for e in A.bad_d if e[0] < q and e[2] <= q]
    bad_mu = [e for e in A.bad_mu if e[0] + e[2] <= q]
    return CDGA(q, A.basis[: q + 1], mu, [list(M) for M in A.d[:q]], weights, bad_d, bad_mu)


def exterior_algebra(labels, truncation: int | None = None, d=None, weights=None) -> CDGA:
    """Exterior algebra on degree-one generators, basis = sorted subsets.

    ``d`` maps a generator label to a dict ``{(label, label): coeff}`` giving
    its image in degree 2; the differential is extended by Leibniz.
    """
    from itertools import combinations

    n = len(labels)
    N = n if truncation is None else truncation
    subsets = [list(combinations(range(n), k)) for k in range(N + 1)]
    index = [{s: i for i, s in enumerate(level)} for level in subsets]
    names = [["1"]] + [["".join(labels[x] for x in s) for s in level] for level in subsets[1:]]

    def wedge(s, t):
        if set(s) & set(t):
            return 0, None
        merged = list(s) + list(t)
        inv = sum(1 for x in range(len(merged)) for y in range(x + 1, len(merged)) if merged[x] > merged[y])
        return (-1) ** inv, tuple(sorted(merged))

    mu = {}
    for i in range(1, N + 1):
        for j in range(i, N + 1 - i):
            for a, s in enumerate(subsets[i]):
                for b, t in enumerate(subsets[j]):
                    if (i, a) > (j, b):
                        continue
                    sign, u = wedge(s, t)
                    if sign:
                        mu[(i, a, j, b)] = {index[i + j][u]: sign}
    dmat = None
    if d:
        gen_image = []
        for g in range(n):
            vec = [ZERO] * len(subsets[2]) if N >= 2 else []
            for (x, y), c in d.get(labels[g], {}).items():
                sign, u = wedge((labels.index(x),), (labels.index(y),))
                if sign:
                    vec[index[2][u]] += sign * qq(c)
            gen_image.append(vec)
        tmp = CDGA(N, names, mu, None, weights)
        dmat = [[[ZERO] * len(subsets[i]) for _ in range(len(subsets[i + 1]))] for i in range(N)]
        for i in range(1, N):
            for a, s in enumerate(subsets[i]):
                # d(x_{s0} x_{s1} ...) = d(x_{s0}) rest - x_{s0} d(rest)
                total = [ZERO] * len(subsets[i + 1])
                for pos, g in enumerate(s):
                    sign = (-1) ** pos
                    before = tuple(s[:pos])
                    after = tuple(s[pos + 1:])
                    piece = tmp.unit_vector(0, 0)
                    deg = 0
                    if before:
                        piece = tmp.unit_vector(len(before), index[len(before)][before])
                        deg = len(before)
                    piece = tmp.multiply(deg, piece, 2, gen_image[g])
                    deg += 2
                    if after:
                        piece = tmp.multiply(deg, piece, len(after),
                                             tmp.unit_vector(len(after), index[len(after)][after]))
                    total = [x + sign * y for x, y in zip(total, piece)]
                for k, c in enumerate(total):
                    dmat[i][k][a] = c
    return CDGA(N, names, mu, dmat, weights)
