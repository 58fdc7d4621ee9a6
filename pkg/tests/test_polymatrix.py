import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES
from jumploci.cdga import CDGA
from jumploci.exactalg import (
    Ideal,
    MultiPoly,
    PolyMatrix,
    exact_divide,
    generic_rank,
    kernel_basis,
    minors_ideal,
    parse_poly,
    qq,
    rank_at,
)
from jumploci.exactalg.polymatrix import fraction_free_echelon
from jumploci.resonance import omega_complex

T = ("t1", "t2")


def M(rows, names=T):
    return PolyMatrix([[parse_poly(x, names) for x in r] for r in rows], len(names), names)


def to_sympy(A: PolyMatrix):
    syms = sympy.symbols(A.names)
    loc = dict(zip(A.names, syms))
    return sympy.Matrix([[sympy.sympify(str(x).replace("^", "**"), locals=loc) for x in r] for r in A.rows])


FIXTURE_MATRICES = [
    M([["t1", "0"], ["0", "t1"]]),
    M([["t1", "t1"], ["t1", "t1"]]),
    M([["0", "0"], ["0", "0"]]),
    M([["t1", "t2", "1"], ["t2", "t1*t2", "t2"], ["t1 - 1", "0", "t2^2"]]),
    M([["t1 - t2", "t1^2 - t1*t2"], ["1", "t1"], ["t2", "t1*t2"]]),
    M([["t1", "t2", "0", "1"], ["0", "t1", "t2", "0"]]),
]


def test_generic_rank_examples():
    t = ("t",)
    assert generic_rank(M([["t", "0"], ["0", "t"]], t)) == 2
    assert generic_rank(M([["t", "t"], ["t", "t"]], t)) == 1
    assert generic_rank(PolyMatrix.zeros(3, 2, 1, t)) == 0


@pytest.mark.parametrize("idx", range(len(FIXTURE_MATRICES)))
def test_generic_rank_matches_sympy_and_samples(idx):
    A = FIXTURE_MATRICES[idx]
    g = generic_rank(A)
    assert g == to_sympy(A).rank()
    rng = random.Random(idx)
    sampled = max(rank_at(A, [qq(rng.randint(-50, 50)) for _ in T]) for _ in range(50))
    assert sampled == g


@pytest.mark.parametrize("idx", range(len(FIXTURE_MATRICES)))
def test_minors_cut_out_rank_strata(idx):
    A = FIXTURE_MATRICES[idx]
    rng = random.Random(100 + idx)
    # include points on the special loci t1 = 0, t2 = 0, t1 = t2, t1 = 1
    pts = [[qq(0), qq(0)], [qq(1), qq(0)], [qq(0), qq(3)], [qq(2), qq(2)], [qq(1), qq(5)]]
    pts += [[qq(rng.randint(-9, 9)) for _ in T] for _ in range(100)]
    for k in range(0, min(A.nrows, A.ncols) + 1):
        ideal = minors_ideal(A, k + 1)
        for p in pts:
            assert (rank_at(A, p) <= k) == ideal.vanishes_at(p)


def test_minors_ideal_edge_cases():
    A = FIXTURE_MATRICES[0]
    assert minors_ideal(A, 0).is_unit()
    assert minors_ideal(A, 3).is_zero()
    with pytest.raises(ValueError):
        minors_ideal(A, -1)


def test_minors_match_sympy():
    A = FIXTURE_MATRICES[3]
    det = sympy.expand(to_sympy(A).det())
    (ours,) = list(A.minors(3))
    assert sympy.expand(to_sympy(PolyMatrix([[ours]], 2, T))[0, 0] - det) == 0


@pytest.mark.parametrize("idx", range(len(FIXTURE_MATRICES)))
def test_kernel_basis_is_kernel(idx):
    A = FIXTURE_MATRICES[idx]
    ker = kernel_basis(A)
    assert len(ker) == A.ncols - generic_rank(A)
    if ker:
        K = PolyMatrix([list(c) for c in zip(*ker)], 2, T, len(ker))
        assert (A @ K).is_zero()
        assert generic_rank(K) == len(ker)


def test_fraction_free_entries_are_polynomials():
    A = FIXTURE_MATRICES[3]
    rows, pivots = fraction_free_echelon(A)
    assert pivots == [0, 1, 2]
    # the last Bareiss pivot is the determinant up to sign
    assert rows[-1][-1] == (list(A.minors(3))[0]) or rows[-1][-1] == -(list(A.minors(3))[0])


def test_exact_divide():
    p = parse_poly("t1^2 - t2^2", T)
    assert exact_divide(p, parse_poly("t1 - t2", T)) == parse_poly("t1 + t2", T)
    with pytest.raises(ArithmeticError):
        exact_divide(p, parse_poly("t1 + 2", T))
    with pytest.raises(ZeroDivisionError):
        exact_divide(p, MultiPoly.zero(2, T))


def test_shape_errors():
    with pytest.raises(ValueError):
        PolyMatrix([[1, 2], [3]], 1)
    with pytest.raises(ValueError):
        FIXTURE_MATRICES[0] @ FIXTURE_MATRICES[4]


entries = st.sampled_from(["0", "1", "-2", "t1", "t2", "t1 - t2", "t1*t2 + 1", "t2^2", "3*t1 - 1"])


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_generic_rank_property(m, n, data):
    rows = data.draw(st.lists(st.lists(entries, min_size=n, max_size=n), min_size=m, max_size=m))
    A = M(rows)
    assert generic_rank(A) == to_sympy(A).rank()


def test_minors_ideal_examples():
    A = M([["t1", "t2"], ["t2", "t1"]])
    assert minors_ideal(A, 2).same_as(Ideal([parse_poly("t1^2 - t2^2", T)], 2, T))
    t = ("t",)
    assert minors_ideal(M([["t"]], t), 1).same_as(Ideal([parse_poly("t", t)], 1, t))
    assert minors_ideal(A, 3).is_zero()


def test_rank_at_examples():
    t = ("t",)
    assert rank_at(M([["t"]], t), [qq(0)]) == 0
    assert rank_at(M([["t"]], t), [qq(5)]) == 1
    D1 = omega_complex(CDGA.load(FIXTURES / "cdga" / "heisenberg_model.json")).D(1)
    assert D1.shape() == (3, 3)
    assert rank_at(D1, [qq(1), qq(0)]) == 2
