"""Intersection matrices of boundary divisors and the degree-one germ comparison.

The comparison pits ``R^1_r`` of the Gysin model against ``R^1_r`` of the
cohomology ring of the compactification, pulled back along ``H^1(X̄) ≅ H^1(X)``.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .cdga import formal_from_ring, h1_cocycles
from .exactalg import config as _config
from .exactalg.groebner import saturate_at_origin
from .exactalg.linalg import coordinates, det, matmul, nullspace, transpose
from .exactalg.poly import MultiPoly
from .exactalg.polymatrix import kernel_basis
from .exactalg.rational import ZERO, qq, to_str
from .gysin import CompactificationData, GysinCDGA, build_gysin, h1_iso_check
from .resonance import (
    ResonanceLocus,
    local_dimension_at_zero,
    omega_complex,
    resonance_locus,
    restrict_to_subspace,
)

POSITIVE = "positive-definite"
NEGATIVE = "negative-definite"
INDEFINITE = "indefinite"
DEGENERATE = "degenerate"


class HypothesisUnmetError(RuntimeError):
    """Some block is not definite; ``report`` holds what was computed so far."""

    def __init__(self, message: str, report: dict):
        self.report = report
        super().__init__(message)


def _matrix_str(M) -> list:
    return [[to_str(x) for x in r] for r in M]


@dataclass(frozen=True)
class DefinitenessVerdict:
    verdict: str
    minors: tuple

    @property
    def definite(self) -> bool:
        return self.verdict in (POSITIVE, NEGATIVE)

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "leading_minors": [to_str(m) for m in self.minors]}


def is_definite(M) -> DefinitenessVerdict:
    """Sylvester's criterion on exact leading principal minors.

    A zero leading minor is reported as degenerate without trying other
    orderings; the germ comparison needs strict definiteness anyway.
    """
    M = [[qq(x) for x in r] for r in M]
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValueError("matrix is not square")
    if any(M[i][j] != M[j][i] for i in range(n) for j in range(i)):
        raise ValueError("matrix is not symmetric")
    minors = tuple(det([r[:k] for r in M[:k]]) for k in range(1, n + 1))
    if any(m == 0 for m in minors):
        return DefinitenessVerdict(DEGENERATE, minors)
    if all(m > 0 for m in minors):
        return DefinitenessVerdict(POSITIVE, minors)
    if all((m < 0) == (k % 2 == 0) for k, m in enumerate(minors)):
        return DefinitenessVerdict(NEGATIVE, minors)
    return DefinitenessVerdict(INDEFINITE, minors)


@dataclass
class Block:
    indices: tuple
    labels: tuple
    matrix: list
    verdict: DefinitenessVerdict

    @property
    def invertible(self) -> bool:
        return det(self.matrix) != 0

    def to_json(self) -> dict:
        return {
            "divisors": list(self.labels),
            "matrix": _matrix_str(self.matrix),
            "invertible": self.invertible,
            **self.verdict.to_json(),
        }


@dataclass
class IntersectionData:
    labels: tuple
    matrix: list
    adjacent: set = field(default_factory=set)  # pairs i < j meeting

    def __post_init__(self):
        n = len(self.labels)
        self.matrix = [[qq(x) for x in r] for r in self.matrix]
        if len(self.matrix) != n or any(len(r) != n for r in self.matrix):
            raise ValueError(f"intersection matrix must be {n}x{n}")
        if any(self.matrix[i][j] != self.matrix[j][i] for i in range(n) for j in range(i)):
            raise ValueError("intersection matrix is not symmetric")
        self.adjacent = {(min(p), max(p)) for p in self.adjacent}
        for i in range(n):
            for j in range(i + 1, n):
                if self.matrix[i][j] and (i, j) not in self.adjacent:
                    raise ValueError(
                        f"{self.labels[i]} and {self.labels[j]} are disjoint but have "
                        f"intersection number {to_str(self.matrix[i][j])}"
                    )

    @classmethod
    def from_compactification(cls, data: CompactificationData, pairing=None) -> "IntersectionData":
        """``pairing`` is ``{"intersection": M}`` or ``{"h2_pairing": Q}``; the latter gives ``GᵀQG``."""
        n = len(data.divisors)
        if pairing is None:
            if data.h2_pairing is None:
                raise ValueError("no pairing given and the compactification carries none")
            pairing = {"h2_pairing": data.h2_pairing}
        if "intersection" in pairing:
            M = [[qq(x) for x in r] for r in pairing["intersection"]]
        elif "h2_pairing" in pairing:
            Q = [[qq(x) for x in r] for r in pairing["h2_pairing"]]
            if len(Q) != data.b2 or any(len(r) != data.b2 for r in Q):
                raise ValueError(f"h2_pairing must be {data.b2}x{data.b2}")
            G = data.gysin_matrix()
            M = matmul(matmul(transpose(G), Q), G) if n else []
        else:
            raise ValueError("pairing file needs an 'intersection' or 'h2_pairing' entry")
        adjacent = {p for p, h0 in data.pairs.items() if h0 > 0}
        return cls(tuple(data.labels), M, adjacent)

    @staticmethod
    def load_pairing(path) -> dict:
        with open(Path(path), encoding="utf-8") as fh:
            return json.load(fh)

    def blocks(self) -> list[Block]:
        """Connected components of the meeting graph, ordered by smallest index."""
        n = len(self.labels)
        nbrs = {i: [] for i in range(n)}
        for i, j in sorted(self.adjacent):
            nbrs[i].append(j)
            nbrs[j].append(i)
        seen = set()
        out = []
        for start in range(n):
            if start in seen:
                continue
            comp = []
            queue = deque([start])
            seen.add(start)
            while queue:
                v = queue.popleft()
                comp.append(v)
                for w in nbrs[v]:
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
            comp.sort()
            sub = [[self.matrix[i][j] for j in comp] for i in comp]
            out.append(Block(tuple(comp), tuple(self.labels[i] for i in comp), sub, is_definite(sub)))
        return out

    def to_json(self) -> dict:
        return {
            "divisors": list(self.labels),
            "matrix": _matrix_str(self.matrix),
            "blocks": [b.to_json() for b in self.blocks()],
        }


def blocks(data: IntersectionData) -> list[Block]:
    return data.blocks()


@dataclass
class H1IsoReport:
    status: str  # "iso", "inconsistent" or "hypothesis-unmet"
    blocks_invertible: bool
    classes_independent: bool
    z1_dimension: int
    b1: int

    def __bool__(self):
        return self.status == "iso"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "blocks_invertible": self.blocks_invertible,
            "classes_independent": self.classes_independent,
            "z1_dimension": self.z1_dimension,
            "b1": self.b1,
        }


def check_h1_iso_under_invertible_blocks(data: IntersectionData, gdata: CompactificationData) -> H1IsoReport:
    """Invertible blocks should force independent Gysin classes and ``dim Z^1 = b1``."""
    invertible = all(b.invertible for b in data.blocks())
    independent = h1_iso_check(gdata)
    z1 = len(h1_cocycles(build_gysin(gdata).cdga))
    if not invertible:
        status = "hypothesis-unmet"
    elif independent and z1 == gdata.b1:
        status = "iso"
    else:
        status = "inconsistent"
    return H1IsoReport(status, invertible, independent, z1, gdata.b1)


# --- vanishing of the divisor coordinates ---------------------------------------

def _eta_subspace(G: GysinCDGA):
    """Basis (in cocycle coordinates) of the cocycles lying in ``A^{1,0}``."""
    cocycles = h1_cocycles(G.cdga)
    bidx = G.b_indices()
    if not cocycles:
        return []
    # columns = cocycles; rows = b-coordinates
    Bproj = [[e[k] for e in cocycles] for k in bidx]
    if not Bproj:
        return [[qq(int(i == j)) for j in range(len(cocycles))] for i in range(len(cocycles))]
    ker = nullspace(Bproj, len(cocycles))
    return [list(r) for r in zip(*ker)] if ker else []


def _sample_points(rng: random.Random, k: int, count: int):
    pts = []
    for idx in range(count):
        if idx % 2:
            den = 2 ** (1 + idx % 8)
            pts.append([qq(rng.randint(-16, 16)) / den for _ in range(k)])
        else:
            pts.append([qq(rng.randint(-50, 50)) / rng.randint(1, 9) for _ in range(k)])
    return pts


def verify_b_vanishing(G: GysinCDGA, samples: int = 200) -> dict:
    """Closed forms for ``d_ω`` (``ω`` in ``A^{1,0}``) should have no divisor part.

    Symbolic: a kernel basis of ``D_1`` over the function field of the
    ``A^{1,0}`` parameters.  Sampled: exact kernels at seeded rational points,
    half of them with dyadic denominators up to ``2^8``.
    """
    bidx = G.b_indices()
    if not bidx:
        return {"status": "pass", "vacuous": True, "symbolic": True,
                "sampled": {"count": 0, "failures": 0, "witnesses": []}}
    cx = omega_complex(G.cdga)
    S = _eta_subspace(G)
    k = len(S[0]) if S else 0
    if k == 0:
        return {"status": "pass", "vacuous": True, "symbolic": True,
                "sampled": {"count": 0, "failures": 0, "witnesses": []}}
    names = tuple(f"s{j + 1}" for j in range(k))
    images = [MultiPoly.linear(row, names) for row in S]
    D1 = cx.D(1).substitute(images)
    symbolic_ok = all(all(v[b].is_zero() for b in bidx) for v in kernel_basis(D1))

    rng = random.Random(_config.current().seed)
    witnesses = []
    failures = 0
    for pt in _sample_points(rng, k, samples):
        M = D1.evaluate(pt)
        for v in nullspace(M, D1.ncols):
            if any(v[b] for b in bidx):
                failures += 1
                if len(witnesses) < 5:
                    witnesses.append({"point": [to_str(x) for x in pt],
                                      "kernel_vector": [to_str(x) for x in v]})
                break
    ok = symbolic_ok and failures == 0
    return {
        "status": "pass" if ok else "fail",
        "vacuous": False,
        "symbolic": symbolic_ok,
        "sampled": {"count": samples, "failures": failures, "witnesses": witnesses},
    }


# --- germ comparison -------------------------------------------------------------

def identification_matrix(G: GysinCDGA) -> list:
    """Columns: the classes of ``H^1(X̄)`` in the cocycle coordinates of the Gysin model."""
    A = G.cdga
    cocycles = h1_cocycles(A)
    cols = []
    for i in G.eta_indices():
        cols.append(coordinates(cocycles, A.unit_vector(1, i)))
    return transpose(cols) if cols else []


def _germ_components(locus: ResonanceLocus):
    """Origin-saturated components through 0 that are not just the point 0."""
    out = []
    for c in locus.components:
        if not c.contains_origin():
            continue
        sat = saturate_at_origin(c)
        if not sat.is_unit():
            out.append(sat)
    return out


def _strong_match(la: ResonanceLocus, lf: ResonanceLocus) -> bool:
    if la.contains_zero() != lf.contains_zero():
        return False
    ga, gf = _germ_components(la), _germ_components(lf)
    return all(any(x.same_as(y) for y in gf) for x in ga) and all(any(y.same_as(x) for x in ga) for y in gf)


def _sampled_match(la: ResonanceLocus, lf: ResonanceLocus, count: int, rng: random.Random):
    n = la.nvars
    pts = [[ZERO] * n] + [[qq(rng.randint(-16, 16)) / 256 for _ in range(n)] for _ in range(count)]
    bad = [p for p in pts if la.member(p) != lf.member(p)]
    return not bad, [[to_str(x) for x in p] for p in bad[:5]]


def thm12_pipeline(gdata: CompactificationData, ambient=None, rmax: int = 1, pairing=None,
                   ignore_hypothesis: bool = False) -> dict:
    if rmax < 1:
        raise ValueError("rmax must be at least 1")
    inter = IntersectionData.from_compactification(gdata, pairing)
    blks = inter.blocks()
    hypothesis = all(b.verdict.definite for b in blks)
    report: dict = {
        "intersection": inter.to_json(),
        "hypothesis_met": hypothesis,
        "hypothesis_ignored": bool(ignore_hypothesis and not hypothesis),
    }
    if not hypothesis and not ignore_hypothesis:
        report["verdict"] = "HYPOTHESIS-UNMET"
        raise HypothesisUnmetError("some intersection block is not definite", report)

    G = build_gysin(gdata)
    F = formal_from_ring(ambient if ambient is not None else gdata.ambient_ring())
    report["h1_iso"] = check_h1_iso_under_invertible_blocks(inter, gdata).to_json()
    report["b_vanishing"] = verify_b_vanishing(G, _config.current().samples)
    C = identification_matrix(G)
    fnames = omega_complex(F).names
    rng = random.Random(_config.current().seed)
    per_r = []
    for r in range(1, rmax + 1):
        la = restrict_to_subspace(resonance_locus(G.cdga, 1, r), C, fnames)
        lf = resonance_locus(F, 1, r)
        strong = _strong_match(la, lf)
        sampled, disagreements = _sampled_match(la, lf, _config.current().samples, rng)
        entry = {
            "r": r,
            "strong": strong,
            "sampled": sampled,
            "sample_disagreements": disagreements,
            "gysin_locus": la.to_json(),
            "formal_locus": lf.to_json(),
        }
        dims_agree = True
        if not strong:
            da = local_dimension_at_zero(la).to_json() if la.contains_zero() else None
            df = local_dimension_at_zero(lf).to_json() if lf.contains_zero() else None
            entry["local_dimension"] = {"gysin": da, "formal": df}
            dims_agree = (da and da["value"]) == (df and df["value"])
        entry["match"] = strong or (sampled and dims_agree)
        entry["flag"] = "strong" if strong else ("sampled-only" if entry["match"] else "none")
        per_r.append(entry)
    report["per_r"] = per_r
    report["verdict"] = "MATCH" if all(e["match"] for e in per_r) else "MISMATCH"
    return report
