import itertools
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagtor.algebra import get_algebra
from diagtor.covers import CoverDescriptor, I_leq, intersect, is_innermost, jones_cover, partition_cover
from diagtor.errors import BudgetExceeded, PreconditionError
from diagtor.exactla.rings import CoefficientRing
from diagtor.exactla.sparse import SparseMatrix
from diagtor.mv import build_mv, check_acyclic, check_square_zero, export, sign_count, simplex_decomposition_check


def test_sign_count_examples():
    assert sign_count({2, 5, 7}, 2) == 0
    assert sign_count({2, 5, 7}, 5) == 1
    with pytest.raises(PreconditionError):
        sign_count({2, 5, 7}, 3)


@given(st.sets(st.integers(1, 9), min_size=2, max_size=5))
def test_sign_identity(S):
    for i, j in itertools.combinations(sorted(S), 2):
        lhs = (-1) ** (sign_count(S - {j}, i) + sign_count(S, j))
        rhs = -((-1) ** (sign_count(S - {i}, j) + sign_count(S, i)))
        assert lhs == rhs


def test_degree_zero_composite_vanishes():
    for cover in (partition_cover(2), jones_cover(3), jones_cover(4, 4)):
        c = build_mv(cover)
        assert c.d(0).matmul(c.d(1)).is_zero()


def test_jones4_degree_two_summands():
    c = build_mv(jones_cover(4, 4))
    subsets = sorted({S for S, _ in c.labels[2]})
    assert subsets == [(0, 2), (1, 3)]
    assert all(is_innermost([k + 1 for k in S], 4) for S in subsets)


@pytest.mark.parametrize("cover", [partition_cover(2), partition_cover(3), jones_cover(5), jones_cover(6, 6)], ids=lambda c: str(c.algebra))
def test_rank_bookkeeping(cover):
    c = build_mv(cover)
    for p in range(1, cover.width + 1):
        expect = sum(intersect([cover.ideals[k] for k in S]).size for S in itertools.combinations(range(cover.width), p))
        assert c.rank(p) == expect
    A = get_algebra(cover.algebra)
    assert c.rank(0) == len(A.basis)
    assert c.rank(-1) == int(A.full.sum())


@pytest.mark.parametrize(
    "cover",
    [partition_cover(2), partition_cover(3)] + [jones_cover(n, n) for n in range(3, 7)],
    ids=lambda c: str(c.algebra),
)
def test_square_zero_and_acyclic(cover):
    c = build_mv(cover)
    assert check_square_zero(c)
    rep = check_acyclic(c)
    assert rep["acyclic"] and rep["square_zero"]
    assert simplex_decomposition_check(c)


def test_acyclic_over_a_field_too():
    c = build_mv(jones_cover(5))
    assert check_acyclic(c, CoefficientRing.prime_field(2))["acyclic"]


def test_single_ideal_cover_is_short_exact():
    cover = jones_cover(3, 1)
    single = CoverDescriptor(cover.algebra, [I_leq(cover.algebra)], I_leq(cover.algebra), 1)
    c = build_mv(single)
    assert c.degrees == [-1, 0, 1]
    assert check_acyclic(c)["acyclic"]
    assert simplex_decomposition_check(c)


def test_simplex_check_catches_a_sign_error():
    c = build_mv(jones_cover(5))
    p = 2
    d = c.d(p)
    cols = [dict(col) for col in d.columns()]
    k = next(i for i, col in enumerate(cols) if len(col) == 2)
    r = next(iter(cols[k]))
    cols[k][r] = -cols[k][r]
    c.complex.differentials[p] = SparseMatrix.from_columns(d.nrows, cols)
    assert not simplex_decomposition_check(c)
    assert not check_square_zero(c)


def test_export(tmp_path):
    c = build_mv(partition_cover(2))
    out = export(c, tmp_path / "mv")
    man = json.loads((out / "manifest.json").read_text())
    assert man["ranks"] == {str(p): c.rank(p) for p in c.degrees}
    for p, name in man["differentials"].items():
        back = SparseMatrix.from_triplet_text((out / name).read_text())
        assert back.equals(c.d(int(p)))


def test_budget():
    with pytest.raises(BudgetExceeded):
        build_mv(jones_cover(5), budget=10)


def test_degree_limit_above_width():
    with pytest.raises(PreconditionError):
        build_mv(jones_cover(3), degree_limit=4)
