"""Modules over Laurent polynomial rings and the trivial-character test.

A module is given by a presentation matrix whose rows are relations and
whose columns are generators.  Laurent entries are made polynomial by
multiplying each row by a monomial (a unit), and every ideal produced
here is saturated by ``t_1 ⋯ t_n`` so that it describes a subvariety of
the torus.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .exactalg.groebner import Ideal, saturate
from .exactalg.poly import MultiPoly, default_names, parse_laurent
from .exactalg.polymatrix import PolyMatrix, minors_ideal
from .resonance import IsolationVerdict, _isolation_certificate


class PresentationError(ValueError):
    """Malformed module or group presentation."""


class TorsionError(PresentationError):
    """The abelianization has torsion, which is out of scope."""


class UnreducedRelatorError(PresentationError):
    """A relator word is not freely reduced."""


# --- module presentations --------------------------------------------------

def _clear_row(row: list, nvars: int) -> list:
    """Multiply a row of Laurent dicts by the monomial making every exponent nonnegative."""
    shift = [0] * nvars
    for entry in row:
        for e in entry:
            for k, x in enumerate(e):
                shift[k] = min(shift[k], x)
    return [{tuple(x - s for x, s in zip(e, shift)): c for e, c in entry.items()} for entry in row]


class LaurentPresentation:
    """Presentation matrix over ℚ[t_1^{±1}, ..., t_n^{±1}], cleared to polynomials."""

    def __init__(self, nvars: int, rows, ncols: int | None = None, names=None):
        if nvars < 0:
            raise PresentationError("number of variables must be nonnegative")
        self.nvars = nvars
        self.names = tuple(names) if names else default_names(nvars)
        if len(self.names) != nvars:
            raise PresentationError("names must match the number of variables")
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise PresentationError("an empty matrix needs an explicit column count")
            ncols = len(rows[0])
        if ncols <= 0:
            raise PresentationError("a presentation needs at least one generator")
        cleared = []
        for r in rows:
            if len(r) != ncols:
                raise PresentationError("presentation matrix is not rectangular")
            dicts = [x.terms if isinstance(x, MultiPoly) else dict(x) for x in r]
            cleared.append([MultiPoly(d, nvars, self.names) for d in _clear_row(dicts, nvars)])
        self.matrix = PolyMatrix(cleared, nvars, self.names, ncols) if cleared else None
        self.nrows = len(cleared)
        self.ncols = ncols

    @classmethod
    def from_json(cls, data: dict) -> "LaurentPresentation":
        try:
            nvars = int(data["nvars"])
            matrix = data["matrix"]
        except (KeyError, TypeError, ValueError) as exc:
            raise PresentationError(f"missing or invalid field: {exc}") from None
        names = tuple(data.get("names") or default_names(nvars))
        try:
            rows = [[parse_laurent(str(x), names) for x in r] for r in matrix]
        except ValueError as exc:
            raise PresentationError(str(exc)) from None
        return cls(nvars, rows, data.get("ncols"), names)

    @classmethod
    def load(cls, path) -> "LaurentPresentation":
        with open(Path(path), encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def rows_as_strings(self) -> list:
        if self.matrix is None:
            return []
        return [[str(x) for x in r] for r in self.matrix.rows]

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "names": list(self.names),
            "ncols": self.ncols,
            "matrix": self.rows_as_strings(),
        }


@dataclass
class SupportVariety:
    """``V(ideal)`` inside the torus ``(ℚ^*)^n``."""

    ideal: Ideal

    @property
    def nvars(self) -> int:
        return self.ideal.nvars

    def is_empty(self) -> bool:
        return self.ideal.is_unit()

    def is_whole_space(self) -> bool:
        return self.ideal.is_zero()

    def member(self, point) -> bool:
        if any(x == 0 for x in point):
            raise ValueError("points of the torus have nonzero coordinates")
        return self.ideal.vanishes_at(point)

    def to_json(self) -> dict:
        return {
            "variables": list(self.ideal.names),
            "generators": [str(g) for g in self.ideal.groebner()],
            "empty": self.is_empty(),
            "whole_space": self.is_whole_space(),
        }


def torus_saturate(ideal: Ideal) -> Ideal:
    """``I : (t_1 ⋯ t_n)^∞``."""
    if ideal.is_zero() or ideal.is_unit() or ideal.nvars == 0:
        return ideal
    prod = MultiPoly.monomial((1,) * ideal.nvars, 1, ideal.names)
    return saturate(ideal, prod)


def elementary_ideal(P: LaurentPresentation, k: int) -> SupportVariety:
    """``E_k``: the ``(cols - k)``-minors, saturated by the torus units.

    ``k >= cols`` gives the unit ideal (the usual Fitting convention).
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    size = P.ncols - k
    if size <= 0:
        return SupportVariety(Ideal.unit(P.nvars, P.names))
    if P.matrix is None or size > P.nrows:
        return SupportVariety(Ideal.zero(P.nvars, P.names))
    return SupportVariety(torus_saturate(minors_ideal(P.matrix, size)))


def support_ideal(P: LaurentPresentation) -> SupportVariety:
    return elementary_ideal(P, 0)


def is_trivial_char_isolated(S: SupportVariety) -> IsolationVerdict:
    """Shift ``t = 1 + s`` and test whether the origin is isolated."""
    I = S.ideal
    n = I.nvars
    snames = tuple(f"s{k + 1}" for k in range(n))
    images = [MultiPoly.var(k, n, snames) + MultiPoly.const(1, n, snames) for k in range(n)]
    shifted = Ideal([g.substitute(images) for g in I.gens], n, snames)
    if not shifted.contains_origin():
        return IsolationVerdict(False, True, [])
    ok, sat, witness = _isolation_certificate(shifted)
    cert = {
        "shifted": [str(g) for g in shifted.groebner()],
        "saturated": [str(g) for g in sat.groebner()],
        "witness": str(witness) if witness is not None else None,
        "isolated": ok,
    }
    return IsolationVerdict(True, ok, [cert])


@dataclass
class CompletionResult:
    finite: bool
    k: int
    support: SupportVariety
    verdict: IsolationVerdict

    def __bool__(self):
        return self.finite

    def to_json(self) -> dict:
        return {
            "finite": self.finite,
            "verdict": "FINITE" if self.finite else "INFINITE",
            "elementary_ideal": self.k,
            "support": self.support.to_json(),
            "isolation": self.verdict.to_json(),
        }


def decide_completion_finiteness(P: LaurentPresentation, k: int = 0) -> CompletionResult:
    """Is the completion at the trivial character finite-dimensional?

    True iff ``1`` is not in ``V(E_k)`` or is an isolated point of it.
    ``k = 0`` is the module itself; ``k = 1`` is the right choice for a Fox
    matrix, whose cokernel carries one extra free summand.
    """
    S = elementary_ideal(P, k)
    verdict = is_trivial_char_isolated(S)
    return CompletionResult(verdict.isolated, k, S, verdict)


# --- group presentations ---------------------------------------------------

Word = tuple  # of (generator index, ±1)


def _free_reduce(word) -> list:
    out: list = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return out


def _inverse(word) -> list:
    return [(g, -e) for g, e in reversed(word)]


class _WordParser:
    _SEP = " \t*.·"

    def __init__(self, text: str, labels):
        self.text = text
        self.pos = 0
        self.labels = sorted(labels, key=len, reverse=True)
        self.index = {l: i for i, l in enumerate(labels)}
        self.upper = {
            l.upper(): i for i, l in enumerate(labels)
            if l.upper() != l and l.upper() not in self.index
        }

    def error(self, msg):
        raise PresentationError(f"{msg} at position {self.pos} in {self.text!r}")

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in self._SEP:
            self.pos += 1

    def parse(self) -> tuple[list, bool]:
        word, reduced = self.sequence(top=True)
        self.skip()
        if self.pos != len(self.text):
            self.error("unexpected character")
        return word, reduced

    def sequence(self, top=False):
        letters = []
        reduced = True
        while True:
            self.skip()
            if self.pos >= len(self.text) or self.text[self.pos] in ",]":
                break
            factor, _ = self.factor()
            for piece in factor:
                if letters and letters[-1][0] == piece[0] and letters[-1][1] == -piece[1]:
                    reduced = False
                letters.append(piece)
        return letters, reduced

    def exponent(self) -> int:
        m = re.compile(r"\^\(?(-?\d+)\)?").match(self.text, self.pos)
        if not m:
            return 1
        self.pos = m.end()
        return int(m.group(1))

    def factor(self):
        t = self.text
        if t[self.pos] == "[":
            self.pos += 1
            u, _ = self.sequence()
            self.skip()
            if self.pos >= len(t) or t[self.pos] != ",":
                self.error("expected ',' in commutator")
            self.pos += 1
            v, _ = self.sequence()
            self.skip()
            if self.pos >= len(t) or t[self.pos] != "]":
                self.error("expected ']'")
            self.pos += 1
            base = _free_reduce(u + v + _inverse(u) + _inverse(v))
            is_letter = False
        else:
            base = None
            for label in self.labels:
                if t.startswith(label, self.pos):
                    base = [(self.index[label], 1)]
                    self.pos += len(label)
                    break
            else:
                for up, i in sorted(self.upper.items(), key=lambda kv: -len(kv[0])):
                    if t.startswith(up, self.pos):
                        base = [(i, -1)]
                        self.pos += len(up)
                        break
            if base is None:
                self.error("unknown generator")
            is_letter = True
        n = self.exponent()
        piece = base if n >= 0 else _inverse(base)
        out = []
        for _ in range(abs(n)):
            out.extend(piece)
        return (out if is_letter else _free_reduce(out)), is_letter


def parse_word(text: str, labels) -> list:
    """Parse a word; ``a^-1``, ``A`` (when not itself a generator) and ``[u,v] = u v u^-1 v^-1``."""
    word, reduced = _WordParser(text, list(labels)).parse()
    if not reduced:
        raise UnreducedRelatorError(f"relator {text!r} is not freely reduced")
    return word


@dataclass
class GroupPresentation:
    generators: tuple
    relators: tuple  # of words
    relator_text: tuple = field(default=())

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator labels")
        for w in self.relators:
            if _free_reduce(w) != list(w):
                raise UnreducedRelatorError(f"relator {w!r} is not freely reduced")

    @classmethod
    def from_json(cls, data: dict) -> "GroupPresentation":
        try:
            gens = tuple(str(g) for g in data["generators"])
            texts = tuple(str(r) for r in data.get("relators", []))
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"missing or invalid field: {exc}") from None
        if not gens:
            raise PresentationError("a group presentation needs generators")
        words = tuple(tuple(parse_word(r, gens)) for r in texts)
        for text, w in zip(texts, words):
            if not w:
                raise PresentationError(f"relator {text!r} is trivial")
        return cls(gens, words, texts)

    @classmethod
    def load(cls, path) -> "GroupPresentation":
        with open(Path(path), encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def exponent_sums(self) -> list[list[int]]:
        out = []
        for w in self.relators:
            row = [0] * len(self.generators)
            for g, e in w:
                row[g] += e
            out.append(row)
        return out


def _ext_gcd(a: int, b: int):
    """``(g, x, y)`` with ``a x + b y = g = gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _column_reduce(R: list, ncols: int):
    """Unimodular ``V`` with ``R V = [B | 0]``; returns ``(R V, V, rank)``."""
    M = [list(r) for r in R]
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def combine(c1, c2, a, b, c, d):
        # (col c1, col c2) <- (a*c1 + b*c2, c*c1 + d*c2)
        for T in (M, V):
            for row in T:
                x, y = row[c1], row[c2]
                row[c1], row[c2] = a * x + b * y, c * x + d * y

    r = 0
    for i in range(len(M)):
        if r == ncols:
            break
        for c in range(r + 1, ncols):
            x, y = M[i][r], M[i][c]
            if y == 0:
                continue
            g, s, t = _ext_gcd(x, y)
            combine(r, c, s, t, -y // g, x // g)
        if M[i][r] < 0:
            for T in (M, V):
                for row in T:
                    row[r] = -row[r]
        if M[i][r] != 0:
            r += 1
    return M, V, r


def _row_lattice_index(B: list, r: int) -> int:
    """Index of the row lattice of ``B`` (rank ``r``) inside ``ℤ^r``."""
    rows = [list(x[:r]) for x in B if any(x[:r])]
    det = 1
    for c in range(r):
        piv = [i for i, row in enumerate(rows) if row[c]]
        while len(piv) > 1:
            piv.sort(key=lambda i: abs(rows[i][c]))
            p = piv[0]
            for i in piv[1:]:
                q = rows[i][c] // rows[p][c]
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[p])]
            piv = [i for i, row in enumerate(rows) if row[c]]
        if not piv:
            return 0
        det *= abs(rows[piv[0]][c])
        rows.pop(piv[0])
    return det


@dataclass
class Abelianization:
    rank: int
    images: list  # generator -> exponent vector in ℤ^rank


def abelianize(G: GroupPresentation) -> Abelianization:
    ng = len(G.generators)
    R = G.exponent_sums()
    M, V, r = _column_reduce(R, ng)
    if r and _row_lattice_index(M, r) != 1:
        raise TorsionError("the abelianization has torsion")
    return Abelianization(ng - r, [V[k][r:] for k in range(ng)])


def fox_derivative(word, j: int, images, nvars: int) -> dict:
    """Abelianized ``∂w/∂x_j`` as a Laurent dict."""
    out: dict = {}
    pos = [0] * nvars
    for g, e in word:
        if e == 1:
            if g == j:
                key = tuple(pos)
                out[key] = out.get(key, 0) + 1
            pos = [p + x for p, x in zip(pos, images[g])]
        else:
            pos = [p - x for p, x in zip(pos, images[g])]
            if g == j:
                key = tuple(pos)
                out[key] = out.get(key, 0) - 1
    return {k: v for k, v in out.items() if v}


@dataclass
class FoxResult:
    presentation: LaurentPresentation
    abelianization: Abelianization
    note: str = (
        "rows are relators and columns are generators; the cokernel is the "
        "Alexander module of the presentation (relative homology of the "
        "maximal abelian cover), not its first homology"
    )

    def to_json(self) -> dict:
        return {
            "rank": self.abelianization.rank,
            "images": self.abelianization.images,
            "presentation": self.presentation.to_json(),
            "note": self.note,
        }


def fox_alexander_matrix(G: GroupPresentation) -> FoxResult:
    ab = abelianize(G)
    n = ab.rank
    rows = [[fox_derivative(w, j, ab.images, n) for j in range(len(G.generators))] for w in G.relators]
    P = LaurentPresentation(n, rows, len(G.generators))
    return FoxResult(P, ab)
