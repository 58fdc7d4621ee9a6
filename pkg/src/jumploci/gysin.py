"""Degree-two truncation of the Gysin model of a normal-crossing compactification.

For ``X = X̄ \\ D`` with ``D = ⋃_j D_j`` the model has

* ``A^1 = H^1(X̄) ⊕ ⊕_j H^0(D_j)``  (weights 1 and 2),
* ``A^2 = H^2(X̄) ⊕ ⊕_j H^1(D_j) ⊕ ⊕_{j<j'} H^0(D_j ∩ D_j')``  (weights 2, 3, 4),

with ``d(g_j) = ι_{j!}(1)`` and products

* ``η·η'`` the cup product,
* ``η·g_j = ι_j^*(η)`` in the ``H^1(D_j)`` slot (so ``g_j·η = -ι_j^*(η)``),
* ``g_j·g_j' = (1, ..., 1)`` in ``H^0(D_j ∩ D_j')`` for ``j < j'``, ``g_j² = 0``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .cdga import CDGA, CDGAValidationError, formal_from_ring, h1_cocycles, validate
from .exactalg.linalg import rank
from .exactalg.rational import ZERO, qq, to_str


class CompactificationError(ValueError):
    """Inconsistent compactification data (shapes or the projection formula)."""

    def __init__(self, message: str, witnesses=()):
        self.witnesses = list(witnesses)
        super().__init__(message)


@dataclass(frozen=True)
class Divisor:
    label: str
    h1: int
    gysin: tuple
    restriction: tuple  # b1 rows x h1 columns: image of each H^1(X̄) basis vector
    h1_pairing: tuple | None = None


@dataclass
class CompactificationData:
    b1: int
    b2: int
    cup: dict  # (i, j) -> {k: coeff} for H^1_i ∪ H^1_j
    divisors: list
    pairs: dict  # (j, j') with j < j' -> h0 of the intersection
    h2_pairing: tuple | None = None
    h1_labels: tuple = ()
    h2_labels: tuple = ()

    def __post_init__(self):
        if self.b1 < 0 or self.b2 < 0:
            raise CompactificationError("Betti numbers must be nonnegative")
        if not self.h1_labels:
            self.h1_labels = tuple(f"e{i + 1}" for i in range(self.b1))
        if not self.h2_labels:
            self.h2_labels = tuple(f"h{i + 1}" for i in range(self.b2))
        if len(self.h1_labels) != self.b1 or len(self.h2_labels) != self.b2:
            raise CompactificationError("label arrays must match b1 and b2")
        for (i, j), vec in self.cup.items():
            if not (0 <= i < self.b1 and 0 <= j < self.b1):
                raise CompactificationError(f"cup entry ({i}, {j}) out of range")
            if any(not 0 <= k < self.b2 for k in vec):
                raise CompactificationError(f"cup entry ({i}, {j}) lands outside H^2")
        labels = set()
        for D in self.divisors:
            if D.label in labels:
                raise CompactificationError(f"duplicate divisor label {D.label!r}")
            labels.add(D.label)
            if D.h1 < 0:
                raise CompactificationError(f"{D.label}: h1 must be nonnegative")
            if len(D.gysin) != self.b2:
                raise CompactificationError(f"{D.label}: gysin class needs {self.b2} entries")
            if len(D.restriction) != self.b1 or any(len(r) != D.h1 for r in D.restriction):
                raise CompactificationError(f"{D.label}: restriction must be {self.b1}x{D.h1}")
            if D.h1_pairing is not None and (
                len(D.h1_pairing) != D.h1 or any(len(r) != D.h1 for r in D.h1_pairing)
            ):
                raise CompactificationError(f"{D.label}: h1_pairing must be {D.h1}x{D.h1}")
        n = len(self.divisors)
        for (i, j), h0 in self.pairs.items():
            if not (0 <= i < j < n):
                raise CompactificationError(f"pair ({i}, {j}) is not an index pair i < j")
            if h0 < 0:
                raise CompactificationError(f"pair ({i}, {j}) has negative h0")
        if self.h2_pairing is not None and (
            len(self.h2_pairing) != self.b2 or any(len(r) != self.b2 for r in self.h2_pairing)
        ):
            raise CompactificationError(f"h2_pairing must be {self.b2}x{self.b2}")

    @property
    def labels(self) -> list[str]:
        return [D.label for D in self.divisors]

    def gysin_matrix(self):
        """``b2 x |J|`` matrix whose columns are the classes ``ι_{j!}(1)``."""
        return [[D.gysin[k] for D in self.divisors] for k in range(self.b2)]

    def h0(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.pairs.get((i, j), 0)

    # --- serialization --------------------------------------------------
    @classmethod
    def from_json(cls, data: dict) -> "CompactificationData":
        try:
            amb = data["ambient"]
            b1, b2 = int(amb["b1"]), int(amb["b2"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CompactificationError(f"missing or invalid ambient data: {exc}") from None
        cup: dict = {}
        for entry in amb.get("cup", []):
            if len(entry) != 4:
                raise CompactificationError(f"cup entry {entry!r} must be [i, j, k, coeff]")
            i, j, k, c = int(entry[0]), int(entry[1]), int(entry[2]), qq(entry[3])
            vec = cup.setdefault((i, j), {})
            vec[k] = vec.get(k, ZERO) + c
        cup = {key: {k: c for k, c in vec.items() if c} for key, vec in cup.items()}
        h2_pairing = amb.get("h2_pairing")
        if h2_pairing is not None:
            h2_pairing = tuple(tuple(qq(x) for x in r) for r in h2_pairing)
        divisors = []
        for D in data.get("divisors", []):
            try:
                h1 = int(D["h1"])
                div = Divisor(
                    str(D["label"]),
                    h1,
                    tuple(qq(x) for x in D["gysin"]),
                    tuple(tuple(qq(x) for x in r) for r in D.get("restriction", [[]] * 0)),
                    tuple(tuple(qq(x) for x in r) for r in D["h1_pairing"])
                    if D.get("h1_pairing") is not None else None,
                )
            except (KeyError, TypeError) as exc:
                raise CompactificationError(f"invalid divisor entry: {exc}") from None
            if not div.restriction and b1:
                raise CompactificationError(f"{div.label}: restriction matrix is required")
            if not div.restriction:
                div = Divisor(div.label, div.h1, div.gysin, tuple(() for _ in range(b1)), div.h1_pairing)
            divisors.append(div)
        pairs = {}
        for p in data.get("pairs", []):
            i, j, h0 = int(p["i"]), int(p["j"]), int(p["h0"])
            if i > j:
                i, j = j, i
            if (i, j) in pairs and pairs[(i, j)] != h0:
                raise CompactificationError(f"pair ({i}, {j}) listed twice with different h0")
            pairs[(i, j)] = h0
        return cls(
            b1, b2, cup, divisors, pairs, h2_pairing,
            tuple(amb.get("h1_labels", ())), tuple(amb.get("h2_labels", ())),
        )

    @classmethod
    def load(cls, path) -> "CompactificationData":
        with open(Path(path), encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))

    def ambient_ring(self) -> dict:
        """The cohomology ring of ``X̄`` through degree 2, as CDGA JSON."""
        mu = []
        for (i, j), vec in sorted(self.cup.items()):
            for k, c in sorted(vec.items()):
                mu.append([1, i, 1, j, 2, k, to_str(c)])
        return {
            "truncation": 2,
            "basis": [["1"], list(self.h1_labels), list(self.h2_labels)],
            "mu": mu,
        }


def _cup_vector(data: CompactificationData, i: int, j: int) -> dict:
    if (i, j) in data.cup:
        return dict(data.cup[(i, j)])
    if (j, i) in data.cup and i != j:
        return {k: -c for k, c in data.cup[(j, i)].items()}
    return {}


def projection_formula_violations(data: CompactificationData) -> list[str]:
    """Check ``⟨ι_j^*η · ι_j^*η', [D_j]⟩ = ⟨η ∪ η' ∪ ι_{j!}(1), [X̄]⟩`` for all pairs.

    Needs the ambient ``h2_pairing`` and the divisor's ``h1_pairing``;
    divisors without the pairing data are skipped.
    """
    if data.h2_pairing is None:
        return []
    Q = data.h2_pairing
    out = []
    for D in data.divisors:
        if D.h1_pairing is None:
            continue
        P = D.h1_pairing
        for a in range(data.b1):
            for b in range(data.b1):
                cup = _cup_vector(data, a, b)
                lhs = sum((c * Q[k][m] * D.gysin[m] for k, c in cup.items() for m in range(data.b2)), ZERO)
                ra, rb = D.restriction[a], D.restriction[b]
                rhs = sum((ra[x] * P[x][y] * rb[y] for x in range(D.h1) for y in range(D.h1)), ZERO)
                if lhs != rhs:
                    out.append(
                        f"{D.label}: <{data.h1_labels[a]}*{data.h1_labels[b]}, [D]> = {to_str(lhs)}"
                        f" but restricted pairing gives {to_str(rhs)}"
                    )
    return out


@dataclass
class GysinCDGA:
    cdga: CDGA
    data: CompactificationData
    bigrading: tuple  # per degree, the (p, l) of every basis element

    def hilbert_coeffs(self) -> tuple:
        return tuple(self.cdga.dims)

    def b_indices(self) -> list[int]:
        """Positions of the ``A^{0,1}`` basis elements inside ``A^1``."""
        return [k for k, pl in enumerate(self.bigrading[1]) if pl == (0, 1)]

    def eta_indices(self) -> list[int]:
        return [k for k, pl in enumerate(self.bigrading[1]) if pl == (1, 0)]


def build_gysin(data: CompactificationData) -> GysinCDGA:
    violations = projection_formula_violations(data)
    if violations:
        raise CompactificationError(
            "projection formula fails: " + violations[0], violations
        )
    b1, b2 = data.b1, data.b2
    J = data.divisors
    nJ = len(J)
    deg1 = list(data.h1_labels) + [f"g[{D.label}]" for D in J]
    big1 = [(1, 0)] * b1 + [(0, 1)] * nJ
    deg2 = list(data.h2_labels)
    big2 = [(2, 0)] * b2
    slot11 = []
    for D in J:
        slot11.append(len(deg2))
        deg2 += [f"{D.label}.{c + 1}" for c in range(D.h1)]
        big2 += [(1, 1)] * D.h1
    slot02 = {}
    for i in range(nJ):
        for j in range(i + 1, nJ):
            h0 = data.h0(i, j)
            if h0:
                slot02[(i, j)] = len(deg2)
                deg2 += [f"{J[i].label}&{J[j].label}.{k + 1}" for k in range(h0)]
                big2 += [(0, 2)] * h0

    mu: dict = {}
    for (i, j), vec in data.cup.items():
        if vec:
            mu[(1, i, 1, j)] = dict(vec)
    for jdx, D in enumerate(J):
        g = b1 + jdx
        for a in range(b1):
            vec = {slot11[jdx] + c: x for c, x in enumerate(D.restriction[a]) if x}
            if vec:
                mu[(1, a, 1, g)] = vec
    for (i, j), start in slot02.items():
        mu[(1, b1 + i, 1, b1 + j)] = {start + k: 1 for k in range(data.h0(i, j))}

    dims = [1, len(deg1), len(deg2)]
    d0 = [[ZERO] for _ in range(dims[1])]
    d1 = [[ZERO] * dims[1] for _ in range(dims[2])]
    for jdx, D in enumerate(J):
        for k, x in enumerate(D.gysin):
            d1[k][b1 + jdx] = x
    weights = [[0], [p + 2 * l for p, l in big1], [p + 2 * l for p, l in big2]]
    A = CDGA(2, [["1"], deg1, deg2], mu, [d0, d1], weights)
    report = validate(A)
    if not report.ok:
        raise CDGAValidationError(report)
    return GysinCDGA(A, data, (((0, 0),), tuple(big1), tuple(big2)))


def h1_iso_check(data: CompactificationData) -> bool:
    """Is ``H^1(X̄) -> H^1(X)`` an isomorphism, i.e. are the classes ``ι_{j!}(1)`` independent?"""
    n = len(data.divisors)
    if n == 0:
        return True
    return rank(data.gysin_matrix()) == n if data.b2 else False


def hilbert_coeffs(G: GysinCDGA) -> tuple:
    return G.hilbert_coeffs()


def ambient_formal(data: CompactificationData) -> CDGA:
    return formal_from_ring(data.ambient_ring())


def z1_dimension(G: GysinCDGA) -> int:
    return len(h1_cocycles(G.cdga))
