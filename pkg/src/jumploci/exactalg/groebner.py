"""Gröbner bases and the ideal operations built on them.

Buchberger's algorithm with the Gebauer-Möller pair criteria and the
normal selection strategy (sugar breaks ties). Polynomials are handled internally as plain ``{exponent: mpq}``
dicts; the public surface speaks :class:`MultiPoly` and :class:`Ideal`.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush
from itertools import combinations
from operator import add, sub

from . import config as _config
from .poly import GREVLEX, MonomialOrder, MultiPoly, block_elimination, default_names
from .rational import ONE, ZERO


# --- dict-level kernels ---------------------------------------------------

def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(map(max, a, b))


def _coprime(a, b) -> bool:
    for x, y in zip(a, b):
        if x and y:
            return False
    return True


def _reduce(f: dict, basis, key, deadline=None) -> dict:
    """Full normal form of ``f`` modulo monic ``basis`` = [(lm, poly), ...]."""
    p = dict(f)
    heap = [(key(e), e) for e in p]
    heapify(heap)
    rem = {}
    steps = 0
    while heap:
        _, e = heappop(heap)
        c = p.get(e)
        if c is None:
            continue
        for lm, g in basis:
            if _divides(lm, e):
                shift = tuple(map(sub, e, lm))
                for ge, gc in g.items():
                    ne = tuple(map(add, ge, shift))
                    old = p.get(ne)
                    if old is None:
                        p[ne] = -c * gc
                        heappush(heap, (key(ne), ne))
                    else:
                        v = old - c * gc
                        if v:
                            p[ne] = v
                        else:
                            del p[ne]
                break
        else:
            rem[e] = c
            del p[e]
        steps += 1
        if deadline is not None and not steps & 0x3FF:
            deadline.check()
    return rem


def _monic_dict(p: dict, key):
    lm = min(p, key=key)
    inv = ONE / p[lm]
    return lm, {e: c * inv for e, c in p.items()}


def _linear_echelon(polys, key):
    """Row-echelon form of the coefficient matrix; spans the same vector space."""
    rows: dict = {}
    for f in polys:
        r = _reduce_linear(f, rows, key)
        if r:
            lm, r = _monic_dict(r, key)
            rows[lm] = r
    return list(rows.values())


def _reduce_linear(f: dict, rows: dict, key) -> dict:
    p = dict(f)
    heap = [(key(e), e) for e in p]
    heapify(heap)
    while heap:
        _, e = heappop(heap)
        c = p.get(e)
        if c is None:
            continue
        row = rows.get(e)
        if row is None:
            continue
        for ge, gc in row.items():
            old = p.get(ge)
            if old is None:
                p[ge] = -c * gc
                heappush(heap, (key(ge), ge))
            else:
                v = old - c * gc
                if v:
                    p[ge] = v
                else:
                    del p[ge]
    return p


def _spoly(f, lmf, g, lmg, lcm):
    sf = tuple(map(sub, lcm, lmf))
    sg = tuple(map(sub, lcm, lmg))
    out = {tuple(map(add, e, sf)): c for e, c in f.items()}
    for e, c in g.items():
        ne = tuple(map(add, e, sg))
        v = out.get(ne, ZERO) - c
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return out


def _is_constant(p: dict) -> bool:
    return len(p) == 1 and not any(next(iter(p)))


def buchberger(polys, nvars: int, order: MonomialOrder = GREVLEX, label: str = "ideal"):
    """Reduced Gröbner basis (monic dicts, sorted by leading monomial, smallest first)."""
    cfg = _config.current()
    deadline = _config.Deadline(label)
    key = order.desc_key
    unit = [{(0,) * nvars: ONE}]

    inputs = [p for p in polys if p]
    if not inputs:
        return []
    inputs = _linear_echelon(inputs, key)
    if any(_is_constant(p) for p in inputs):
        return unit
    inputs.sort(key=lambda p: tuple(-x for x in key(min(p, key=key))))

    store: list[dict] = []
    lms: list[tuple] = []
    sugar: list[int] = []
    active: list[int] = []
    pairs: list[tuple] = []  # (selection key, sugar, i, j, lcm)

    def add_element(h: dict, s: int):
        lm, h = _monic_dict(h, key)
        if sum(lm) > cfg.max_degree or max(sum(e) for e in h) > cfg.max_degree:
            raise _config.ResourceLimitError(
                f"polynomial degree exceeds max_degree={cfg.max_degree}", label
            )
        idx = len(store)
        store.append(h)
        lms.append(lm)
        sugar.append(s)
        # Gebauer-Möller update
        cand = [(g, _lcm(lms[g], lm)) for g in active]
        kept = []
        for pos, (g, l) in enumerate(cand):
            if _coprime(lms[g], lm):
                kept.append((g, l))
                continue
            dominated = False
            for g2, l2 in cand[pos + 1:]:
                if _divides(l2, l):
                    dominated = True
                    break
            if not dominated:
                for g2, l2 in kept:
                    if _divides(l2, l):
                        dominated = True
                        break
            if not dominated:
                kept.append((g, l))
        new_pairs = []
        for g, l in kept:
            if _coprime(lms[g], lm):
                continue
            s_pair = max(sugar[g] + sum(l) - sum(lms[g]), s + sum(l) - sum(lm))
            # smallest lcm first; on lex orders sugar alone lets coefficients explode
            new_pairs.append((tuple(-v for v in key(l)), s_pair, g, idx, l))
        survivors = []
        for pr in pairs:
            _, _, i, j, l = pr
            if (
                _divides(lm, l)
                and _lcm(lms[i], lm) != l
                and _lcm(lms[j], lm) != l
            ):
                continue
            survivors.append(pr)
        pairs[:] = survivors + new_pairs
        active[:] = [g for g in active if not _divides(lm, lms[g])] + [idx]
        if len(active) > cfg.max_basis_size:
            raise _config.ResourceLimitError(
                f"Gröbner basis size exceeds max_basis_size={cfg.max_basis_size}", label
            )

    def basis_view():
        # try divisors with the smallest leading monomial first
        return sorted(((lms[g], store[g]) for g in active), key=lambda t: key(t[0]), reverse=True)

    for f in inputs:
        r = _reduce(f, basis_view(), key, deadline)
        if r:
            if _is_constant(r):
                return unit
            add_element(r, max(sum(e) for e in r))

    while pairs:
        deadline.check()
        best = min(range(len(pairs)), key=lambda k: pairs[k][:4])
        _, s, i, j, l = pairs.pop(best)
        sp = _spoly(store[i], lms[i], store[j], lms[j], l)
        if not sp:
            continue
        r = _reduce(sp, basis_view(), key, deadline)
        if r:
            if _is_constant(r):
                return unit
            add_element(r, s)

    # interreduce to the reduced basis
    final = sorted(active, key=lambda g: tuple(-x for x in key(lms[g])))
    out = []
    for g in final:
        others = [(lms[h], store[h]) for h in final if h != g]
        r = _reduce(store[g], others, key, deadline)
        out.append(_monic_dict(r, key)[1])
    return out


# --- public polynomial-level API ------------------------------------------

def _ring_of(polys, nvars=None, names=None):
    for p in polys:
        return p.nvars, p.names
    if nvars is None:
        raise ValueError("cannot infer the ring of an empty generator list")
    return nvars, tuple(names) if names else default_names(nvars)


def _short(polys, limit=4) -> str:
    items = [str(p) for p in polys[:limit]]
    if len(polys) > limit:
        items.append(f"... {len(polys) - limit} more")
    return "(" + ", ".join(items) + ")"


class Ideal:
    """An ideal of ℚ[t_1..t_n] with cached reduced Gröbner bases per order."""

    __slots__ = ("gens", "nvars", "names", "_gb")

    def __init__(self, gens=(), nvars: int | None = None, names=None):
        gens = list(gens)
        nvars, names = _ring_of(gens, nvars, names)
        clean = {}
        for g in gens:
            if g.nvars != nvars:
                raise ValueError("generators live in different rings")
            if g:
                g = g.primitive().with_names(names)
                clean[g] = None
        self.gens = tuple(
            sorted(clean, key=lambda g: (GREVLEX.desc_key(g.leading()[0]), str(g)))
        )
        self.nvars = nvars
        self.names = tuple(names)
        self._gb: dict = {}

    @classmethod
    def zero(cls, nvars: int, names=None) -> "Ideal":
        return cls((), nvars, names)

    @classmethod
    def unit(cls, nvars: int, names=None) -> "Ideal":
        return cls((MultiPoly.const(1, nvars, names),), nvars, names)

    @classmethod
    def maximal_at_origin(cls, nvars: int, names=None) -> "Ideal":
        return cls([MultiPoly.var(i, nvars, names) for i in range(nvars)], nvars, names)

    def groebner(self, order: MonomialOrder = GREVLEX) -> tuple:
        if order not in self._gb:
            raw = buchberger([dict(g.terms) for g in self.gens], self.nvars, order, label=str(self))
            self._gb[order] = tuple(MultiPoly._raw(p, self.nvars, self.names) for p in raw)
        return self._gb[order]

    def is_unit(self) -> bool:
        gb = self.groebner()
        return len(gb) == 1 and gb[0].is_constant()

    def is_zero(self) -> bool:
        return not self.gens

    def contains(self, p: MultiPoly) -> bool:
        return normal_form(p, self.groebner(), GREVLEX).is_zero()

    def issubset(self, other: "Ideal") -> bool:
        return all(other.contains(g) for g in self.gens)

    def same_as(self, other: "Ideal") -> bool:
        return self.issubset(other) and other.issubset(self)

    def __add__(self, other: "Ideal") -> "Ideal":
        if self.nvars != other.nvars:
            raise ValueError("ideals live in different rings")
        return Ideal(self.gens + other.gens, self.nvars, self.names)

    def vanishes_at(self, point) -> bool:
        return all(not g.evaluate(point) for g in self.gens)

    def contains_origin(self) -> bool:
        return all(not g.constant_term() for g in self.gens)

    def map(self, fn) -> "Ideal":
        gens = [fn(g) for g in self.gens]
        if gens:
            return Ideal(gens)
        probe = fn(MultiPoly.const(1, self.nvars, self.names))
        return Ideal.zero(probe.nvars, probe.names)

    def generator_strings(self) -> list[str]:
        return [str(g) for g in self.gens]

    def __str__(self):
        if not self.gens:
            return "(0)"
        return _short(list(self.gens))

    def __repr__(self):
        return f"Ideal{self}"


def gb(ideal: Ideal, order: MonomialOrder = GREVLEX) -> list[MultiPoly]:
    """Reduced Gröbner basis of ``ideal`` (empty list for the zero ideal)."""
    return list(ideal.groebner(order))


def normal_form(p: MultiPoly, basis, order: MonomialOrder = GREVLEX) -> MultiPoly:
    key = order.desc_key
    view = []
    for g in basis:
        if g.nvars != p.nvars:
            raise ValueError("polynomial and basis live in different rings")
        lm, mg = _monic_dict(g.terms, key)
        view.append((lm, mg))
    return MultiPoly._raw(_reduce(p.terms, view, key), p.nvars, p.names)


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder = GREVLEX) -> MultiPoly:
    key = order.desc_key
    lf, mf = _monic_dict(f.terms, key)
    lg, mg = _monic_dict(g.terms, key)
    return MultiPoly._raw(_spoly(mf, lf, mg, lg, _lcm(lf, lg)), f.nvars, f.names)


def is_groebner_basis(basis, order: MonomialOrder = GREVLEX) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    basis = list(basis)
    for f, g in combinations(basis, 2):
        if not normal_form(s_polynomial(f, g, order), basis, order).is_zero():
            return False
    return True


def ideal_membership(p: MultiPoly, ideal: Ideal) -> bool:
    return ideal.contains(p)


def _eliminate_raw(polys, nvars: int, k: int, label: str):
    """Eliminate the first ``k`` variables; returns dicts in the remaining ones."""
    raw = buchberger(polys, nvars, block_elimination(k), label=label)
    out = []
    for p in raw:
        if all(not any(e[:k]) for e in p):
            out.append({e[k:]: c for e, c in p.items()})
    return out


def eliminate(ideal: Ideal, drop) -> Ideal:
    """``I ∩ ℚ[remaining variables]``, as an ideal in the remaining variables."""
    drop = sorted(set(drop))
    n = ideal.nvars
    if any(not 0 <= i < n for i in drop):
        raise ValueError("variable index out of range")
    keep = [i for i in range(n) if i not in drop]
    names = tuple(ideal.names[i] for i in keep)
    if not drop:
        return Ideal(ideal.gens, n, ideal.names)
    order = drop + keep
    positions = [0] * n
    for new, old in enumerate(order):
        positions[old] = new
    moved = [g.embed(n, positions).terms for g in ideal.gens]
    raw = _eliminate_raw(moved, n, len(drop), str(ideal))
    return Ideal([MultiPoly._raw(p, len(keep), names) for p in raw], len(keep), names)


def _prepend_variable(ideal: Ideal):
    n = ideal.nvars
    positions = list(range(1, n + 1))
    return [g.embed(n + 1, positions).terms for g in ideal.gens]


def saturate(ideal: Ideal, f: MultiPoly) -> Ideal:
    """``I : f^∞`` via ``I + (1 - z f)`` and elimination of ``z``."""
    if f.is_zero():
        raise ValueError("cannot saturate by the zero polynomial")
    if f.is_constant() or ideal.is_zero():
        return Ideal(ideal.gens, ideal.nvars, ideal.names)
    if ideal.is_unit():
        return Ideal.unit(ideal.nvars, ideal.names)
    n = ideal.nvars
    polys = _prepend_variable(ideal)
    zf = f.embed(n + 1, list(range(1, n + 1))).mul_monomial((1,) + (0,) * n)
    polys.append((MultiPoly.const(1, n + 1) - zf).terms)
    raw = _eliminate_raw(polys, n + 1, 1, f"{ideal} : ({f})^inf")
    return Ideal([MultiPoly._raw(p, n, ideal.names) for p in raw], n, ideal.names)


def intersect(a: Ideal, b: Ideal) -> Ideal:
    """``I ∩ J`` via ``y I + (1 - y) J`` and elimination of ``y``."""
    if a.nvars != b.nvars:
        raise ValueError("ideals live in different rings")
    n = a.nvars
    if a.is_zero() or b.is_zero():
        return Ideal.zero(n, a.names)
    if a.is_unit():
        return Ideal(b.gens, n, a.names)
    if b.is_unit():
        return Ideal(a.gens, n, a.names)
    y = (1,) + (0,) * n
    polys = [MultiPoly._raw(p, n + 1, default_names(n + 1)).mul_monomial(y).terms for p in _prepend_variable(a)]
    for p in _prepend_variable(b):
        mp = MultiPoly._raw(p, n + 1, default_names(n + 1))
        polys.append((mp - mp.mul_monomial(y)).terms)
    raw = _eliminate_raw(polys, n + 1, 1, f"{a} ∩ {b}")
    return Ideal([MultiPoly._raw(p, n, a.names) for p in raw], n, a.names)


def saturate_at_origin(ideal: Ideal) -> Ideal:
    """``I : m^∞`` for ``m = (t_1..t_n)``, as the intersection of the ``I : t_j^∞``."""
    n = ideal.nvars
    if not ideal.contains_origin() or ideal.is_unit():
        # 0 ∉ V(I): no component meets the origin, nothing to remove
        return Ideal(ideal.gens, n, ideal.names)
    result = None
    for j in range(n):
        part = saturate(ideal, MultiPoly.var(j, n, ideal.names))
        result = part if result is None else intersect(result, part)
    return result if result is not None else Ideal(ideal.gens, n, ideal.names)


def krull_dimension(ideal: Ideal) -> int:
    """Dimension of V(I) in affine n-space; -1 for the unit ideal."""
    basis = ideal.groebner(GREVLEX)
    if len(basis) == 1 and basis[0].is_constant():
        return -1
    n = ideal.nvars
    supports = [frozenset(i for i, x in enumerate(g.leading()[0]) if x) for g in basis]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = frozenset(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0
