import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES, load_json
from jumploci.cdga import h1_cocycles, validate
from jumploci.exactalg import nullspace, qq
from jumploci.gysin import (
    CompactificationData,
    CompactificationError,
    ambient_formal,
    build_gysin,
    h1_iso_check,
    hilbert_coeffs,
    projection_formula_violations,
    z1_dimension,
)
from jumploci.resonance import cocycle_weights


def data(name):
    return CompactificationData.load(FIXTURES / "gysin" / f"{name}.json")


def test_ruled_surface_hilbert_coefficients():
    G = build_gysin(data("ruled_surface"))
    assert hilbert_coeffs(G) == (1, 4, 6)
    # (1 + t)^4 through degree two
    t = sympy.Symbol("t")
    series = sympy.Poly(sympy.expand((1 + t) ** 4), t).all_coeffs()[::-1]
    assert list(hilbert_coeffs(G)) == series[:3]
    assert h1_iso_check(G.data)
    assert z1_dimension(G) == 2


def test_diagonal_dimensions():
    D = data("diagonal")
    G = build_gysin(D)
    assert hilbert_coeffs(G) == (1, 5, D.b2 + 2 + 0)
    assert z1_dimension(G) == 4
    assert h1_iso_check(D)


def test_empty_divisor_echoes_ambient():
    D = data("no_divisors")
    G = build_gysin(D)
    assert hilbert_coeffs(G) == (1, D.b1, D.b2)
    assert h1_iso_check(D)
    assert G.cdga.to_json()["mu"] == ambient_formal(D).to_json()["mu"]


def test_dependent_classes():
    D = data("dependent_classes")
    assert not h1_iso_check(D)
    assert z1_dimension(build_gysin(D)) == D.b1 + 1


def test_projection_formula_violation_is_rejected():
    D = data("ruled_surface_bad_projection")
    assert projection_formula_violations(D)
    with pytest.raises(CompactificationError) as err:
        build_gysin(D)
    assert err.value.witnesses
    assert not projection_formula_violations(data("ruled_surface"))
    assert not projection_formula_violations(data("diagonal"))


@pytest.mark.parametrize("name", ["ruled_surface", "diagonal", "no_divisors", "dependent_classes"])
def test_gysin_structure(name):
    D = data(name)
    G = build_gysin(D)
    A = G.cdga
    assert validate(A).ok
    assert A.dims[1] == D.b1 + len(D.divisors)
    assert A.dims[2] == D.b2 + sum(x.h1 for x in D.divisors) + sum(D.pairs.values())
    for deg in (1, 2):
        for (p, l), w in zip(G.bigrading[deg], A.weights[deg]):
            assert w == p + 2 * l
    assert min(A.weights[1]) >= 1
    if D.divisors or D.b1:
        assert all(w >= 1 for w in cocycle_weights(A))


@pytest.mark.parametrize("name", ["ruled_surface", "diagonal", "no_divisors", "dependent_classes"])
def test_z1_structure(name):
    D = data(name)
    G = build_gysin(D)
    cocycles = h1_cocycles(G.cdga)
    Gm = D.gysin_matrix()
    ker_dim = len(nullspace(Gm, len(D.divisors))) if D.divisors and D.b2 else len(D.divisors)
    assert len(cocycles) == D.b1 + ker_dim
    for e in cocycles:
        b = [e[k] for k in G.b_indices()]
        assert all(sum((Gm[r][c] * b[c] for c in range(len(b))), qq(0)) == 0 for r in range(D.b2))
    if h1_iso_check(D):
        assert len(cocycles) == D.b1


def test_json_errors():
    base = load_json("gysin/ruled_surface.json")
    bad = dict(base, ambient=dict(base["ambient"], b1=3))
    with pytest.raises(CompactificationError):
        CompactificationData.from_json(bad)
    with pytest.raises(CompactificationError):
        CompactificationData.from_json({"divisors": []})
    dup = dict(base, divisors=[base["divisors"][0], base["divisors"][0]])
    with pytest.raises(CompactificationError):
        CompactificationData.from_json(dup)
    wrong_pair = dict(base, pairs=[{"i": 0, "j": 5, "h0": 1}])
    with pytest.raises(CompactificationError):
        CompactificationData.from_json(wrong_pair)


small = st.integers(-2, 2)


@st.composite
def compactifications(draw):
    b1 = draw(st.sampled_from([0, 2]))
    b2 = draw(st.integers(1, 3))
    cup = [[0, 1, k, str(draw(small))] for k in range(b2)] if b1 else []
    nd = draw(st.integers(0, 3))
    divisors = []
    for j in range(nd):
        h1 = draw(st.integers(0, 2))
        divisors.append({
            "label": f"D{j}",
            "h1": h1,
            "gysin": [str(draw(small)) for _ in range(b2)],
            "restriction": [[str(draw(small)) for _ in range(h1)] for _ in range(b1)],
        })
    pairs = [{"i": i, "j": j, "h0": draw(st.integers(0, 2))} for i in range(nd) for j in range(i + 1, nd)]
    return {"ambient": {"b1": b1, "b2": b2, "cup": cup}, "divisors": divisors, "pairs": pairs}


@given(compactifications())
def test_random_compactifications(raw):
    D = CompactificationData.from_json(raw)
    G = build_gysin(D)
    A = G.cdga
    assert validate(A).ok
    assert A.dims == (1, D.b1 + len(D.divisors), D.b2 + sum(x.h1 for x in D.divisors) + sum(D.pairs.values()))
    rank = sympy.Matrix([[sympy.Rational(str(x)) for x in r] for r in D.gysin_matrix()]).rank() if D.divisors else 0
    assert z1_dimension(G) == D.b1 + len(D.divisors) - rank
    assert h1_iso_check(D) == (z1_dimension(G) == D.b1)
