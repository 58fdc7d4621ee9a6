import random
import time

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIXTURES
from jumploci.exactalg import qq
from jumploci.gysin import CompactificationData, build_gysin
from jumploci.intersection import (
    DEGENERATE,
    INDEFINITE,
    NEGATIVE,
    POSITIVE,
    HypothesisUnmetError,
    IntersectionData,
    check_h1_iso_under_invertible_blocks,
    identification_matrix,
    is_definite,
    thm12_pipeline,
    verify_b_vanishing,
)


def data(name):
    return CompactificationData.load(FIXTURES / "gysin" / f"{name}.json")


def pairing(name):
    return IntersectionData.load_pairing(FIXTURES / "gysin" / f"{name}_pairing.json")


def quad(M, v):
    return sum(v[i] * M[i][j] * v[j] for i in range(len(v)) for j in range(len(v)))


def sign_oracle(M, count=200, seed=0):
    """Signs of vᵀMv over seeded nonzero rational vectors."""
    rng = random.Random(seed)
    n = len(M)
    signs = set()
    for _ in range(count):
        v = [qq(rng.randint(-20, 20)) / rng.randint(1, 5) for _ in range(n)]
        if not any(v):
            continue
        q = quad(M, v)
        signs.add((q > 0) - (q < 0))
    return signs


@pytest.mark.parametrize("M,verdict", [
    ([[1]], POSITIVE),
    ([[-1]], NEGATIVE),
    ([[0]], DEGENERATE),
    ([[2, 1], [1, 2]], POSITIVE),
    ([[-2, 1], [1, -2]], NEGATIVE),
    ([[1, 0], [0, -1]], INDEFINITE),
    ([[0, 1], [1, 0]], DEGENERATE),
    ([[1, 2], [2, 1]], INDEFINITE),
])
def test_is_definite_examples(M, verdict):
    got = is_definite(M)
    assert got.verdict == verdict
    signs = sign_oracle([[qq(x) for x in r] for r in M])
    if verdict == POSITIVE:
        assert signs == {1}
    elif verdict == NEGATIVE:
        assert signs == {-1}


def test_minors_reported():
    assert [str(m) for m in is_definite([[2, 1], [1, 2]]).minors] == ["2", "3"]


def test_is_definite_errors():
    with pytest.raises(ValueError):
        is_definite([[1, 2]])
    with pytest.raises(ValueError):
        is_definite([[1, 2], [3, 1]])


symmetric = st.integers(1, 4).flatmap(lambda n: st.lists(
    st.integers(-5, 5), min_size=n * n, max_size=n * n
).map(lambda xs: [[xs[min(i, j) * n + max(i, j)] for j in range(n)] for i in range(n)]))


@given(symmetric)
def test_is_definite_against_sampling_and_sympy(M):
    got = is_definite(M)
    S = sympy.Matrix(M)
    if got.verdict == POSITIVE:
        assert S.is_positive_definite
        assert sign_oracle([[qq(x) for x in r] for r in M]) == {1}
    elif got.verdict == NEGATIVE:
        assert S.is_negative_definite
        assert sign_oracle([[qq(x) for x in r] for r in M]) == {-1}
    elif got.verdict == INDEFINITE:
        assert not S.is_positive_definite and not S.is_negative_definite
    else:
        assert any(S[:k, :k].det() == 0 for k in range(1, len(M) + 1))


# --- blocks -----------------------------------------------------------------------

def test_ruled_surface_blocks():
    inter = IntersectionData.from_compactification(data("ruled_surface"), pairing("ruled_surface"))
    blocks = inter.blocks()
    assert [b.matrix for b in blocks] == [[[1]], [[-1]]]
    assert [b.verdict.verdict for b in blocks] == [POSITIVE, NEGATIVE]
    assert [b.labels for b in blocks] == [("D0",), ("Dinf",)]


def test_diagonal_block_is_degenerate():
    D = data("diagonal")
    inter = IntersectionData.from_compactification(D, pairing("diagonal"))
    (block,) = inter.blocks()
    assert block.matrix == [[0]]
    assert block.verdict.verdict == DEGENERATE and not block.invertible
    report = check_h1_iso_under_invertible_blocks(inter, D)
    assert report.status == "hypothesis-unmet"
    assert report.classes_independent


def path_of_three(perm):
    """Divisors on a path D0 - D1 - D2 with self-intersections -2, relabelled by perm."""
    base = [[-2, 1, 0], [1, -2, 1], [0, 1, -2]]
    labels = ["D0", "D1", "D2"]
    inv = {p: k for k, p in enumerate(perm)}
    M = [[base[perm[i]][perm[j]] for j in range(3)] for i in range(3)]
    adjacent = {(inv[0], inv[1]), (inv[1], inv[2])}
    return IntersectionData(tuple(labels[p] for p in perm), M, adjacent)


def test_path_of_three_block():
    (block,) = path_of_three((0, 1, 2)).blocks()
    assert block.verdict.verdict == NEGATIVE
    assert [str(m) for m in block.verdict.minors] == ["-2", "3", "-4"]


@pytest.mark.parametrize("perm", [(0, 1, 2), (2, 1, 0), (1, 0, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1)])
def test_blocks_invariant_under_permutation(perm):
    inter = path_of_three(perm)
    (block,) = inter.blocks()
    assert block.indices == (0, 1, 2)
    assert block.verdict.verdict == NEGATIVE
    # two components: isolate D1 by dropping its edges and matrix entries
    M = [[x if (i == j) else 0 for j, x in enumerate(r)] for i, r in enumerate(inter.matrix)]
    split = IntersectionData(inter.labels, M, set())
    blocks = split.blocks()
    assert [b.indices for b in blocks] == [(0,), (1,), (2,)]
    assert sorted(b.labels[0] for b in blocks) == ["D0", "D1", "D2"]


def test_disjoint_divisors_must_not_meet():
    with pytest.raises(ValueError):
        IntersectionData(("A", "B"), [[1, 1], [1, 1]], set())
    with pytest.raises(ValueError):
        IntersectionData(("A", "B"), [[1, 2], [1, 1]], {(0, 1)})


def test_explicit_intersection_matrix():
    inter = IntersectionData.from_compactification(data("ruled_surface"), {"intersection": [[1, 0], [0, -1]]})
    assert [b.verdict.verdict for b in inter.blocks()] == [POSITIVE, NEGATIVE]
    with pytest.raises(ValueError):
        IntersectionData.from_compactification(data("ruled_surface"), {"nothing": []})


# --- b-vanishing and the pipeline --------------------------------------------------

@pytest.mark.parametrize("name", ["ruled_surface", "no_divisors"])
def test_b_vanishing_under_definite_blocks(name):
    res = verify_b_vanishing(build_gysin(data(name)), samples=200)
    assert res["status"] == "pass"
    assert res["sampled"]["failures"] == 0
    if name == "no_divisors":
        assert res["vacuous"]
    else:
        assert res["sampled"]["count"] == 200 and res["symbolic"]


def test_identification_matrix_is_invertible():
    G = build_gysin(data("ruled_surface"))
    C = identification_matrix(G)
    assert len(C) == 2 and sympy.Matrix([[sympy.Rational(str(x)) for x in r] for r in C]).det() != 0


def test_pipeline_ruled_surface():
    start = time.monotonic()
    report = thm12_pipeline(data("ruled_surface"), rmax=2, pairing=pairing("ruled_surface"))
    assert time.monotonic() - start < 60
    assert report["verdict"] == "MATCH"
    for entry in report["per_r"]:
        assert entry["strong"] and entry["flag"] == "strong"
    first = report["per_r"][0]
    assert first["gysin_locus"]["contains_zero"] and first["formal_locus"]["contains_zero"]
    assert report["h1_iso"]["status"] == "iso"


def test_pipeline_without_divisors_matches_trivially():
    report = thm12_pipeline(data("no_divisors"), rmax=1)
    assert report["verdict"] == "MATCH"
    assert report["intersection"]["blocks"] == []


def test_pipeline_diagonal_refuses_then_reports_mismatch():
    with pytest.raises(HypothesisUnmetError) as err:
        thm12_pipeline(data("diagonal"), pairing=pairing("diagonal"))
    assert err.value.report["verdict"] == "HYPOTHESIS-UNMET"
    report = thm12_pipeline(data("diagonal"), pairing=pairing("diagonal"), ignore_hypothesis=True)
    assert report["verdict"] == "MISMATCH" and report["hypothesis_ignored"]
    (entry,) = report["per_r"]
    dims = entry["local_dimension"]
    assert dims["gysin"]["value"] == 2 and dims["gysin"]["agree"]
    assert dims["formal"]["value"] == 0
    assert len(set(dims["gysin"]["per_seed"])) == 1


def test_pipeline_rejects_bad_rmax():
    with pytest.raises(ValueError):
        thm12_pipeline(data("ruled_surface"), rmax=0)
