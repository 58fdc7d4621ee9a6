#!/usr/bin/env python3
"""Regenerate the JSON fixtures shipped in ``src/jumploci/data/fixtures``."""

from __future__ import annotations

import json
import sys
from itertools import combinations
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from jumploci.cdga import CDGA, exterior_algebra  # noqa: E402
from jumploci.exactalg.rational import to_str  # noqa: E402

OUT = ROOT / "src" / "jumploci" / "data" / "fixtures"


def dump(name: str, data: dict):
    path = OUT / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def cdga_fixtures():
    dump("cdga/torus.json", exterior_algebra(["x", "y"]).to_json())
    solv = exterior_algebra(["x", "y"], truncation=3, d={"y": {("x", "y"): -1}})
    dump("cdga/solvable.json", solv.to_json())
    heis = exterior_algebra(["x", "y", "z"], d={"z": {("x", "y"): 1}})
    dump("cdga/heisenberg_model.json", heis.to_json())
    dump("cdga/heisenberg_formal.json", {
        "truncation": 3,
        "basis": [["1"], ["x", "y"], ["xz", "yz"], ["xyz"]],
        "mu": [[1, 0, 2, 1, 3, 0, "1"], [1, 1, 2, 0, 3, 0, "-1"]],
        "d": [],
    })
    ring = exterior_algebra(["a1", "b1", "a2", "b2"], truncation=3).to_json()
    ring.pop("d", None)
    dump("cdga/e_times_e_ring.json", ring)


def _mutations():
    base = exterior_algebra(["x", "y", "z"], d={"z": {("x", "y"): 1}}).to_json()

    def variant(mutate):
        data = json.loads(json.dumps(base))
        mutate(data)
        return data

    def extra_unit(data):
        data["basis"][0] = ["1", "u"]

    def d_of_one(data):
        data["d"].append([0, 0, 0, "1"])

    def d_squared(data):
        # d(xy) = xyz makes d∘d(z) = d(xy) nonzero
        data["d"].append([2, 0, 0, "1"])

    def leibniz(data):
        # d(xz) = xyz; the Leibniz rule forces d(xz) = -x·xy = 0
        data["d"].append([2, 1, 0, "1"])

    def graded_comm(data):
        # y·x = +xy conflicts with x·y = xy
        data["mu"].append([1, 1, 1, 0, 2, 0, "1"])

    def unitality(data):
        data["mu"].append([0, 0, 1, 0, 1, 0, "2"])

    def associativity(data):
        # x·(yz) = 2xyz while (xy)·z = xyz
        data["mu"] = [e for e in data["mu"] if e[:4] != [1, 0, 2, 2]]
        data["mu"].append([1, 0, 2, 2, 3, 0, "2"])

    def differential_degree(data):
        data["d"].append([1, 0, 3, 0, "1"])

    def product_degree(data):
        data["mu"].append([1, 0, 1, 1, 3, 0, "1"])

    def weight_mu(data):
        data["weights"] = [[0], [1, 1, 2], [2, 3, 3], [5]]

    def weight_d(data):
        data["weights"] = [[0], [1, 1, 1], [2, 2, 2], [3]]

    def weight_positive(data):
        data["weights"] = [[0], [0, 2, 2], [2, 2, 4], [4]]

    return {
        "connected": variant(extra_unit),
        "d0-zero": variant(d_of_one),
        "d-squared": variant(d_squared),
        "leibniz": variant(leibniz),
        "graded-commutativity": variant(graded_comm),
        "unitality": variant(unitality),
        "associativity": variant(associativity),
        "differential-degree": variant(differential_degree),
        "product-degree": variant(product_degree),
        "weight-mu": variant(weight_mu),
        "weight-d": variant(weight_d),
        "weight-positive": variant(weight_positive),
    }


def mutation_fixtures():
    for axiom, data in _mutations().items():
        dump(f"mutations/{axiom}.json", data)


def _wedge_sign(s, t):
    if set(s) & set(t):
        return 0, None
    merged = list(s) + list(t)
    inv = sum(1 for i in range(len(merged)) for j in range(i + 1, len(merged)) if merged[i] > merged[j])
    return (-1) ** inv, tuple(sorted(merged))


def ruled_surface():
    """``P(E)`` over an elliptic curve with its sections ``D_0`` and ``D_∞``.

    ``H^2`` has basis ``F`` (fibre) and ``D_∞``; ``F·F = 0``, ``F·D_∞ = 1``,
    ``D_∞² = -1`` and ``D_0 = D_∞ + F``.
    """
    ident = [["1", "0"], ["0", "1"]]
    sympl = [["0", "1"], ["-1", "0"]]
    return {
        "ambient": {
            "b1": 2, "b2": 2,
            "h1_labels": ["a", "b"], "h2_labels": ["F", "Dinf"],
            "cup": [[0, 1, 0, "1"]],
            "h2_pairing": [["0", "1"], ["1", "-1"]],
        },
        "divisors": [
            {"label": "D0", "h1": 2, "gysin": ["1", "1"], "restriction": ident, "h1_pairing": sympl},
            {"label": "Dinf", "h1": 2, "gysin": ["0", "1"], "restriction": ident, "h1_pairing": sympl},
        ],
        "pairs": [{"i": 0, "j": 1, "h0": 0}],
    }


def diagonal():
    """The diagonal in ``E × E`` for an elliptic curve ``E``."""
    gens = ["a1", "b1", "a2", "b2"]
    pairs = list(combinations(range(4), 2))
    order = [(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)]
    labels = ["".join(gens[x] for x in p) for p in order]
    pos = {p: k for k, p in enumerate(order)}
    cup = []
    for i, j in pairs:
        cup.append([i, j, pos[(i, j)], "1"])
    pairing = [[0] * 6 for _ in range(6)]
    for u, s in enumerate(order):
        for v, t in enumerate(order):
            sign, m = _wedge_sign(s, t)
            if sign and m == (0, 1, 2, 3):
                pairing[u][v] = sign
    # δ = a1b1 + a2b2 - a1b2 + b1a2
    delta = [0] * 6
    delta[pos[(0, 1)]] += 1
    delta[pos[(2, 3)]] += 1
    delta[pos[(0, 3)]] -= 1
    delta[pos[(1, 2)]] += 1
    restriction = [["1", "0"], ["0", "1"], ["1", "0"], ["0", "1"]]
    return {
        "ambient": {
            "b1": 4, "b2": 6,
            "h1_labels": gens, "h2_labels": labels,
            "cup": cup,
            "h2_pairing": [[to_str(x) for x in r] for r in pairing],
        },
        "divisors": [
            {"label": "Delta", "h1": 2, "gysin": [to_str(x) for x in delta],
             "restriction": restriction, "h1_pairing": [["0", "1"], ["-1", "0"]]},
        ],
        "pairs": [],
    }


def compactification_fixtures():
    rs = ruled_surface()
    dump("gysin/ruled_surface.json", rs)
    dump("gysin/ruled_surface_pairing.json", {"h2_pairing": rs["ambient"]["h2_pairing"]})
    dg = diagonal()
    dump("gysin/diagonal.json", dg)
    dump("gysin/diagonal_pairing.json", {"h2_pairing": dg["ambient"]["h2_pairing"]})
    empty = {"ambient": dict(rs["ambient"]), "divisors": [], "pairs": []}
    dump("gysin/no_divisors.json", empty)
    bad = json.loads(json.dumps(rs))
    bad["divisors"][0]["h1_pairing"] = [["0", "-1"], ["1", "0"]]
    dump("gysin/ruled_surface_bad_projection.json", bad)
    twin = json.loads(json.dumps(rs))
    twin["divisors"][1]["gysin"] = list(twin["divisors"][0]["gysin"])
    twin["divisors"][1].pop("h1_pairing")
    dump("gysin/dependent_classes.json", twin)


def alexander_fixtures():
    dump("alexander/heisenberg_module.json", {"nvars": 2, "matrix": [["t1 - 1"], ["t2 - 1"]]})
    dump("alexander/free_rank_one_module.json", {"nvars": 1, "matrix": [["0"]]})
    dump("alexander/zero_module.json", {"nvars": 2, "matrix": [["1"]]})
    dump("alexander/trefoil.json", {"generators": ["a", "b"], "relators": ["a b a b^-1 a^-1 b^-1"]})
    dump("alexander/heisenberg_group.json", {"generators": ["x", "y"], "relators": ["[x,[x,y]]", "[y,[x,y]]"]})
    dump("alexander/free_group.json", {"generators": ["a"], "relators": []})


def main():
    cdga_fixtures()
    mutation_fixtures()
    compactification_fixtures()
    alexander_fixtures()
    # sanity: every non-mutation algebra loads
    for p in sorted((OUT / "cdga").glob("*.json")):
        CDGA.load(p)


if __name__ == "__main__":
    main()
