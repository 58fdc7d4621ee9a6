import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from jumploci.exactalg import (
    GREVLEX,
    LEX,
    Ideal,
    MultiPoly,
    ResourceLimitError,
    RunConfig,
    eliminate,
    gb,
    ideal_membership,
    intersect,
    is_groebner_basis,
    krull_dimension,
    normal_form,
    parse_poly,
    qq,
    s_polynomial,
    saturate,
    saturate_at_origin,
    using,
)

XY = ("x", "y")
XYZ = ("x", "y", "z")


def P(text, names=XY):
    return parse_poly(text, names)


def I(*gens, names=XY):
    return Ideal([P(g, names) for g in gens], len(names), names)


def strs(ideal, order=GREVLEX):
    return sorted(str(g) for g in gb(ideal, order))


def sympy_gb(ideal, order="grevlex"):
    syms = sympy.symbols(ideal.names)
    exprs = [sympy.sympify(str(g).replace("^", "**"), locals=dict(zip(ideal.names, syms))) for g in ideal.gens]
    G = sympy.groebner(exprs, *syms, order=order)
    return sorted(str(sympy.Poly(g, *syms).monic().as_expr()).replace("**", "^") for g in G.exprs)


def same_polys(ours, theirs, names):
    """Equal as sets of polynomials up to nonzero scalars."""
    a = {P(s, names).monic() for s in ours}
    b = {P(s, names).monic() for s in theirs}
    return a == b


# --- fixed examples -----------------------------------------------------------

def test_gb_examples():
    assert strs(I("x")) == ["x"]
    assert strs(I("x^2 - 1", "x - 1")) == ["x - 1"]
    got = {P(s) for s in strs(I("x^2 + y^2", "x*y"))}
    assert got == {P("x*y"), P("x^2 + y^2"), P("y^3")}


def test_gb_example_independent_oracle():
    ideal = I("x^2 + y^2", "x*y")
    assert same_polys(strs(ideal), sympy_gb(ideal), XY)


def test_normal_form_examples():
    basis = gb(I("x"))
    assert normal_form(P("x^2"), basis).is_zero()
    assert normal_form(P("y"), basis) == P("y")
    assert normal_form(P("x*y + y"), gb(I("x - 1"))) == P("2*y")


def test_membership_examples():
    assert not ideal_membership(P("x"), I("x^2", "x*y"))
    assert ideal_membership(P("x^2"), I("x"))
    assert ideal_membership(P("1"), I("x - 1", "x"))


def test_eliminate_examples():
    assert strs(eliminate(I("y - x^2", "x"), [0])) == ["y"]
    assert eliminate(I("x"), [0]).is_zero()
    assert eliminate(I("x*y - 1"), [1]).is_zero()


def test_saturate_examples():
    assert saturate(I("x^2", "x*y"), P("x")).is_unit()
    assert strs(saturate(I("x^2", "x*y"), P("y"))) == ["x"]
    assert strs(saturate(I("x"), P("y"))) == ["x"]


def test_saturate_at_origin_examples():
    assert strs(saturate_at_origin(I("x^2", "x*y"))) == ["x"]
    assert saturate_at_origin(I("x", "y")).is_unit()
    assert strs(saturate_at_origin(I("x"))) == ["x"]


def test_krull_dimension_examples():
    assert krull_dimension(Ideal.zero(2, XY)) == 2
    assert krull_dimension(I("x")) == 1
    assert krull_dimension(I("x", "y")) == 0
    assert krull_dimension(Ideal.unit(2, XY)) == -1


def test_intersection():
    J = intersect(I("x"), I("y"))
    assert strs(J) == ["x*y"]
    assert intersect(I("x"), Ideal.unit(2, XY)).same_as(I("x"))


def test_generators_are_normalized():
    ideal = Ideal([P("-2*x + 4*y")], 2, XY)
    assert [str(g) for g in ideal.gens] == ["x - 2*y"]


def test_resource_guards_raise():
    ideal = Ideal([P("x^3 - y*z", XYZ), P("y^3 - x*z", XYZ), P("z^3 - x*y", XYZ)], 3, XYZ)
    with using(RunConfig(max_basis_size=2)):
        with pytest.raises(ResourceLimitError) as err:
            ideal.groebner()
    assert "ideal" in str(err.value)
    fresh = Ideal(list(ideal.gens), 3, XYZ)
    with using(RunConfig(max_degree=2)):
        with pytest.raises(ResourceLimitError):
            fresh.groebner()


# --- properties -------------------------------------------------------------------

small_terms = st.dictionaries(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)),
    st.integers(-4, 4).filter(bool),
    min_size=1, max_size=3,
)
small_polys = small_terms.map(lambda d: MultiPoly({e: qq(c) for e, c in d.items()}, 3, XYZ))
ideals = st.lists(small_polys, min_size=1, max_size=3).map(lambda gs: Ideal(gs, 3, XYZ))


@given(ideals)
def test_buchberger_criterion_holds(ideal):
    basis = gb(ideal)
    assert is_groebner_basis(basis)
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            assert normal_form(s_polynomial(basis[i], basis[j]), basis).is_zero()


@given(ideals)
def test_gb_matches_sympy(ideal):
    if ideal.is_zero():
        return
    assert same_polys(strs(ideal), sympy_gb(ideal), XYZ)


@given(ideals)
def test_gb_is_idempotent_and_lex_agrees(ideal):
    basis = gb(ideal)
    again = Ideal(basis, 3, XYZ)
    assert [str(g) for g in gb(again)] == [str(g) for g in basis]
    lex = Ideal(list(ideal.gens), 3, XYZ)
    assert all(ideal.contains(g) for g in gb(lex, LEX))


@given(ideals, small_polys)
def test_saturation_contains_and_idempotent(ideal, f):
    if f.is_zero():
        return
    sat = saturate(ideal, f)
    assert ideal.issubset(sat)
    assert saturate(sat, f).same_as(sat)


def test_membership_agrees_with_evaluation_on_parametrized_variety():
    # V(y - x^2, z - x^3) is the twisted cubic (t, t^2, t^3)
    ideal = Ideal([P("y - x^2", XYZ), P("z - x^3", XYZ)], 3, XYZ)
    rng = random.Random(0x5EED)
    members = [P("y^2 - x*z", XYZ), P("x*y - z", XYZ), P("y^3 - z^2", XYZ)]
    for g in members:
        assert ideal_membership(g, ideal)
    for _ in range(200):
        t = qq(rng.randint(-30, 30)) / rng.randint(1, 7)
        pt = [t, t * t, t * t * t]
        assert all(not g.evaluate(pt) for g in members)
    assert not ideal_membership(P("x", XYZ), ideal)
