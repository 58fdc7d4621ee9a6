"""Aomoto complexes, resonance loci and the isolatedness decisions built on them."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field

from .cdga import CDGA, h1_cocycles, require_valid
from .exactalg import config as _config
from .exactalg.groebner import GREVLEX, Ideal, saturate_at_origin
from .exactalg.linalg import rank
from .exactalg.poly import MultiPoly, default_names
from .exactalg.polymatrix import PolyMatrix, generic_rank, minors_ideal, rank_at
from .exactalg.rational import qq


@dataclass
class OmegaComplex:
    """``D_i(t) = d_i + L(ω)`` for ``ω = Σ t_j e_j`` over the cocycle basis ``e``."""

    cdga: CDGA
    cocycles: list
    matrices: list
    names: tuple

    @property
    def b1(self) -> int:
        return len(self.cocycles)

    def D(self, i: int) -> PolyMatrix:
        """``D_i``; ``D_{-1}`` is the empty map into degree 0."""
        if i < 0:
            return PolyMatrix([[] for _ in range(self.cdga.dims[0])], self.b1, self.names, 0)
        return self.matrices[i]


def omega_complex(A: CDGA) -> OmegaComplex:
    if "omega" in A._cache:
        return A._cache["omega"]
    require_valid(A)
    cocycles = h1_cocycles(A)
    n = len(cocycles)
    names = default_names(n)
    matrices = []
    for i in range(A.N):
        mults = [A.left_multiplication(1, e, i) for e in cocycles]
        rows = []
        for k in range(A.dims[i + 1]):
            row = []
            for a in range(A.dims[i]):
                coeffs = [L[k][a] for L in mults]
                row.append(MultiPoly.linear(coeffs, names, A.d[i][k][a]) if n else
                           MultiPoly.const(A.d[i][k][a], 0, ()))
            rows.append(row)
        matrices.append(PolyMatrix(rows, n, names, A.dims[i]))
    for i in range(A.N - 1):
        if A.dims[i] and A.dims[i + 2] and not (matrices[i + 1] @ matrices[i]).is_zero():
            raise AssertionError(f"twisted differential is not flat: D_{i + 1} D_{i} != 0")
    cx = OmegaComplex(A, cocycles, matrices, names)
    A._cache["omega"] = cx
    return cx


def _as_complex(A) -> OmegaComplex:
    return A if isinstance(A, OmegaComplex) else omega_complex(A)


def _rank(M: PolyMatrix, point) -> int:
    if M.nrows == 0 or M.ncols == 0:
        return 0
    return rank_at(M, point)


def betti_at(A, i: int, point) -> int:
    """``dim H^i(A, d_ω)`` at the rational point ``ω``."""
    cx = _as_complex(A)
    B = cx.cdga
    if not 0 <= i < B.N:
        raise ValueError(f"degree {i} needs d_{i}; must lie in 0..{B.N - 1}")
    point = [qq(x) for x in point]
    if len(point) != cx.b1:
        raise ValueError(f"point must have {cx.b1} coordinates")
    return B.dims[i] - _rank(cx.D(i), point) - _rank(cx.D(i - 1), point)


# --- loci -------------------------------------------------------------------

@dataclass
class ResonanceLocus:
    """A finite union of affine varieties ``V(I_k)`` in the coordinates of H^1."""

    degree: int
    depth: int
    nvars: int
    names: tuple
    components: list
    provenance: list = field(default_factory=list)

    def member(self, point) -> bool:
        point = [qq(x) for x in point]
        if len(point) != self.nvars:
            raise ValueError(f"point must have {self.nvars} coordinates")
        return any(c.vanishes_at(point) for c in self.components)

    def is_empty(self) -> bool:
        return all(c.is_unit() for c in self.components)

    def is_whole_space(self) -> bool:
        return any(c.is_zero() for c in self.components)

    def contains_zero(self) -> bool:
        return any(c.contains_origin() for c in self.components)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "depth": self.depth,
            "variables": list(self.names),
            "empty": self.is_empty(),
            "whole_space": self.is_whole_space(),
            "contains_zero": self.contains_zero(),
            "components": [
                {"generators": [str(g) for g in c.groebner()], "provenance": p}
                for c, p in zip(self.components, self.provenance)
            ],
        }


def _prune(components, provenance):
    """Drop unit ideals and any ideal containing another (its variety is redundant)."""
    keep = [(c, p) for c, p in zip(components, provenance) if not c.is_unit()]
    out = []
    for idx, (c, p) in enumerate(keep):
        redundant = False
        for jdx, (o, _) in enumerate(keep):
            if idx == jdx or not o.issubset(c):
                continue
            # o ⊆ c: V(c) ⊆ V(o). Equal ideals keep the first occurrence only.
            if jdx < idx or not c.issubset(o):
                redundant = True
                break
        if not redundant:
            out.append((c, p))
    return [c for c, _ in out], [p for _, p in out]


def resonance_locus(A, i: int, r: int) -> ResonanceLocus:
    """``R^i_r(A) = {ω : dim H^i(A, d_ω) >= r}`` as a union of determinantal ideals."""
    cx = _as_complex(A)
    B = cx.cdga
    if not 0 <= i < B.N:
        raise ValueError(f"R^{i} needs degrees through {i + 1}; truncation is {B.N}")
    if r < 0:
        raise ValueError("depth must be nonnegative")
    n, names = cx.b1, cx.names
    key = ("locus", i, r)
    if key in B._cache:
        return B._cache[key]
    if r == 0:
        locus = ResonanceLocus(i, r, n, names, [Ideal.zero(n, names)], ["r=0: whole space"])
    elif r > B.dims[i]:
        locus = ResonanceLocus(i, r, n, names, [Ideal.unit(n, names)], [f"r>{B.dims[i]}: empty"])
    else:
        prev, cur = cx.D(i - 1), cx.D(i)
        g_prev = generic_rank(prev) if prev.ncols else 0
        g_cur = generic_rank(cur) if cur.nrows and cur.ncols else 0
        total = B.dims[i] - r
        lo, hi = max(0, total - g_cur), min(total, g_prev)
        if lo > hi:
            lo = hi = min(total, g_prev)
        comps, prov = [], []
        for s in range(lo, hi + 1):
            u = total - s
            comp = minors_ideal(prev, s + 1) + minors_ideal(cur, u + 1) if prev.ncols else \
                Ideal.zero(n, names) + minors_ideal(cur, u + 1)
            comps.append(comp)
            prov.append(f"rank D_{i - 1} <= {s}, rank D_{i} <= {u}")
        comps, prov = _prune(comps, prov)
        comps = [Ideal(list(c.groebner()), n, names) for c in comps]
        if not comps:
            comps, prov = [Ideal.unit(n, names)], ["empty"]
        locus = ResonanceLocus(i, r, n, names, comps, prov)
    B._cache[key] = locus
    return locus


def member(locus: ResonanceLocus, point) -> bool:
    return locus.member(point)


def restrict_to_subspace(locus: ResonanceLocus, B, names=None) -> ResonanceLocus:
    """Pull back along ``t = B s`` for a rational ``b1 x k`` matrix of rank ``k``."""
    B = [[qq(x) for x in row] for row in B]
    if len(B) != locus.nvars:
        raise ValueError(f"subspace matrix needs {locus.nvars} rows")
    k = len(B[0]) if B else 0
    if any(len(row) != k for row in B):
        raise ValueError("subspace matrix is not rectangular")
    if k == 0 or rank(B) != k:
        raise ValueError("subspace matrix must have full column rank")
    names = tuple(names) if names else tuple(f"s{j + 1}" for j in range(k))
    images = [MultiPoly.linear(row, names) for row in B]
    comps = [c.map(lambda g: g.substitute(images)) if not c.is_zero() else Ideal.zero(k, names)
             for c in locus.components]
    comps = [Ideal(c.gens, k, names) for c in comps]
    prov = list(locus.provenance)
    kept = [(c, p) for c, p in zip(comps, prov) if not c.is_unit()]
    if not kept:
        kept = [(Ideal.unit(k, names), "empty after restriction")]
    return ResonanceLocus(locus.degree, locus.depth, k, names,
                          [c for c, _ in kept], [p for _, p in kept])


# --- isolation ---------------------------------------------------------------

@dataclass
class IsolationVerdict:
    contains_zero: bool
    isolated: bool
    certificates: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "contains_zero": self.contains_zero,
            "isolated": self.isolated,
            "certificates": self.certificates,
        }


def _isolation_certificate(ideal: Ideal):
    """Return ``(isolated, saturated ideal, witness)`` for a component through 0."""
    sat = saturate_at_origin(ideal)
    for g in sat.groebner():
        if g.constant_term():
            return True, sat, g
    return False, sat, None


def is_zero_isolated(loci) -> IsolationVerdict:
    """Is 0 an isolated point of the union of the given loci (vacuously so if absent)?"""
    loci = list(loci)
    if len({l.nvars for l in loci}) > 1:
        raise ValueError("loci live in different ambient spaces")
    contains = False
    isolated = True
    certs = []
    for li, locus in enumerate(loci):
        for ci, comp in enumerate(locus.components):
            if not comp.contains_origin():
                continue
            contains = True
            ok, sat, witness = _isolation_certificate(comp)
            certs.append({
                "locus": li,
                "degree": locus.degree,
                "component": ci,
                "saturated": [str(g) for g in sat.groebner()],
                "witness": str(witness) if witness is not None else None,
                "isolated": ok,
            })
            isolated = isolated and ok
    return IsolationVerdict(contains, isolated, certs)


@dataclass
class FinitenessResult:
    finite: bool
    verdict: IsolationVerdict
    loci: list

    def to_json(self) -> dict:
        return {
            "finite": self.finite,
            "verdict": "FINITE" if self.finite else "NOT-ISOLATED",
            "isolation": self.verdict.to_json(),
            "loci": [l.to_json() for l in self.loci],
        }


def decide_finiteness(A, q: int, subspace=None) -> FinitenessResult:
    """Union of ``R^i_1`` for ``i <= q`` (optionally on a subspace); is 0 isolated?"""
    cx = _as_complex(A)
    if not 0 <= q or q + 1 > cx.cdga.N:
        raise ValueError(f"q = {q} needs truncation >= {q + 1}; got {cx.cdga.N}")
    loci = [resonance_locus(cx, i, 1) for i in range(q + 1)]
    if subspace is not None:
        loci = [restrict_to_subspace(l, subspace) for l in loci]
    verdict = is_zero_isolated(loci)
    return FinitenessResult(verdict.isolated, verdict, loci)


# --- local dimension -----------------------------------------------------------

@dataclass
class LocalDimension:
    value: int
    per_seed: list
    seeds: list
    agree: bool
    warning: str | None = None

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "per_seed": self.per_seed,
            "seeds": [hex(s) for s in self.seeds],
            "agree": self.agree,
            "warning": self.warning,
            "method": "generic linear slicing (Monte Carlo, one-sided)",
        }


def _random_subspace(rng: random.Random, n: int, k: int):
    while True:
        B = [[qq(rng.randint(-9, 9)) for _ in range(k)] for _ in range(n)]
        if rank(B) == k:
            return B


def local_dimension_at_zero(locus: ResonanceLocus, seeds=None) -> LocalDimension:
    """Smallest codimension ``c`` of a generic linear slice through 0 isolating 0.

    Each slice is realised as a restriction to a random ``(n - c)``-dimensional
    subspace; three seeds are tried and the largest answer is kept.
    """
    if not locus.contains_zero():
        raise ValueError("0 is not a point of the locus")
    n = locus.nvars
    if seeds is None:
        base = _config.current().seed
        seeds = [base, base + 1, base + 2]
    zero_isolated = is_zero_isolated([locus]).isolated
    per_seed = []
    for seed in seeds:
        rng = random.Random(seed)
        found = n
        if zero_isolated:
            found = 0
        else:
            for c in range(1, n):
                sliced = restrict_to_subspace(locus, _random_subspace(rng, n, n - c))
                if is_zero_isolated([sliced]).isolated:
                    found = c
                    break
        per_seed.append(found)
    agree = len(set(per_seed)) == 1
    warning = None
    if not agree:
        warning = f"slicing answers disagree across seeds: {per_seed}"
        warnings.warn(warning, RuntimeWarning, stacklevel=2)
    return LocalDimension(max(per_seed), per_seed, list(seeds), agree, warning)


# --- weights and probes -------------------------------------------------------------

def cocycle_weights(A: CDGA) -> list[int]:
    """Weight of each cocycle basis vector (must be weight-homogeneous)."""
    if A.weights is None:
        raise ValueError("the algebra carries no weights")
    out = []
    for e in h1_cocycles(A):
        ws = {A.weights[1][k] for k, x in enumerate(e) if x}
        if len(ws) != 1:
            raise ValueError("cocycle basis vector is not weight-homogeneous")
        out.append(ws.pop())
    return out


def _scaled(ideal: Ideal, factors) -> Ideal:
    def phi(g):
        terms = {}
        for e, c in g.terms.items():
            f = c
            for x, k in zip(factors, e):
                if k:
                    f *= x**k
            terms[e] = f
        return MultiPoly._raw(terms, g.nvars, g.names)

    out = Ideal([phi(g) for g in ideal.gens], ideal.nvars, ideal.names)
    # diagonal scaling keeps leading monomials, so the image of a reduced basis is one
    out._gb[GREVLEX] = tuple(phi(g).monic() for g in ideal.groebner())
    return out


def weight_equivariance_check(A: CDGA, locus: ResonanceLocus, s) -> bool:
    """Is the locus stable under ``t_j -> s^{w_j} t_j`` (component by component)?"""
    s = qq(s)
    if not s:
        raise ValueError("scalar must be nonzero")
    w = cocycle_weights(A)
    if len(w) != locus.nvars:
        raise ValueError("locus is not in the coordinates of H^1(A)")
    factors = [s**x for x in w]
    for comp in locus.components:
        image = _scaled(comp, factors)
        if not any(image.issubset(o) and o.issubset(image) for o in locus.components):
            return False
    return True


def line_probe(locus: ResonanceLocus, v) -> list[dict]:
    """Restrict every component to the line ``s·v``; report the generator gcd there.

    A directional diagnostic only: order >= 1 means the component passes
    through 0, and a zero gcd means the whole line lies in the component.
    """
    v = [qq(x) for x in v]
    if len(v) != locus.nvars:
        raise ValueError(f"direction must have {locus.nvars} coordinates")
    if not any(v):
        raise ValueError("direction must be nonzero")
    images = [MultiPoly.linear([x], ("s",)) for x in v]
    out = []
    for comp, prov in zip(locus.components, locus.provenance):
        pulled = Ideal([g.substitute(images) for g in comp.gens], 1, ("s",))
        gb = pulled.groebner()
        if not gb:
            out.append({"gcd": "0", "order_at_zero": None, "line_contained": True,
                        "provenance": prov})
            continue
        g = gb[0]
        out.append({"gcd": str(g), "order_at_zero": min(e[0] for e in g.terms),
                    "line_contained": False, "provenance": prov})
    return out
