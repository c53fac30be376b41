import itertools
import json
import random

import numpy as np
import pytest

from diagtor.algebra import (
    AlgebraElement,
    algebra_id,
    augmentation,
    build_table,
    get_algebra,
    load_table,
    multiply,
    quotient_indices,
    quotient_map,
    save_table,
)
from diagtor.diagrams import SetPartition, compose, enumerate_basis, identity
from diagtor.errors import BudgetExceeded, CacheError, DimensionError
from diagtor.exactla.rings import CoefficientRing

Z = CoefficientRing.integers()
F5 = CoefficientRing.prime_field(5)
RINGS = [Z, CoefficientRing.integers(2), CoefficientRing.prime_field(3, 1), CoefficientRing.rationals(-1), CoefficientRing.modular(4, 2)]


def basis_elems(aid):
    A = get_algebra(aid)
    return [AlgebraElement.basis_element(aid, i) for i in range(len(A.basis))]


def e2():
    return SetPartition.from_blocks(2, [[1, 2], ["1'", "2'"]])


def test_unit_is_right_and_left_identity():
    aid = algebra_id("partition", 2)
    one = AlgebraElement.unit(aid)
    for x in basis_elems(aid):
        assert multiply(x, one, Z).equals(x, Z)
        assert multiply(one, x, Z).equals(x, Z)


@pytest.mark.parametrize("family", ["temperley-lieb", "jones", "partition"])
def test_e_squared_vanishes_at_delta_zero(family):
    aid = algebra_id(family, 2)
    e = AlgebraElement.from_diagram(aid, e2())
    assert multiply(e, e, Z).is_zero
    assert multiply(e, e, CoefficientRing.integers(3)).equals(e.scale(3, Z), Z)


def test_worked_j11_product_in_algebra(j11_example):
    alpha, beta, product = j11_example
    aid = algebra_id("jones", 11)
    # the 11-strand basis is large; check through the diagram oracle without building a table
    d, loops = compose(alpha, beta)
    assert (d, loops) == (product, 1)
    ring = CoefficientRing.integers(7)
    A = get_algebra(aid)
    a = AlgebraElement.from_diagram(A, alpha)
    b = AlgebraElement.from_diagram(A, beta)
    assert multiply(a, b, ring).equals(AlgebraElement.from_diagram(A, product, 7), ring)
    assert augmentation(a, ring) == 0


def test_augmentation_examples():
    aid = algebra_id("jones", 2)
    assert augmentation(AlgebraElement.unit(aid), Z) == 1
    assert augmentation(AlgebraElement.from_diagram(aid, e2()), Z) == 0


def test_mismatched_algebras():
    with pytest.raises(DimensionError):
        multiply(AlgebraElement.unit(algebra_id("jones", 2)), AlgebraElement.unit(algebra_id("jones", 3)), Z)


# -- tables ----------------------------------------------------------------------------


def test_p2_table_entry_for_e():
    aid = algebra_id("partition", 2)
    t = build_table(aid)
    A = get_algebra(aid)
    assert t.product.shape == (15, 15)
    i = A.index_of(e2())
    assert t.entry(i, i) == (i, 1)


@pytest.mark.parametrize("n", [1, 4, 7])
def test_cyclic_table_is_group_law(n):
    t = build_table(algebra_id("cyclic", n))
    for i, j in itertools.product(range(n), repeat=2):
        assert t.entry(i, j) == ((i + j) % n, 0)


def test_symmetric_table_is_composition():
    aid = algebra_id("symmetric", 3)
    A = get_algebra(aid)
    t = build_table(aid)
    assert not t.loops.any()
    # composition of permutations agrees with the diagram product of their diagrams
    P = get_algebra(algebra_id("partition", 3))
    qi = quotient_indices(P.id)
    full = [i for i in range(len(P.basis)) if P.full[i]]
    for i, j in itertools.product(full, repeat=2):
        k, e = P.product(i, j)
        assert e == 0
        assert qi[k] == t.entry(qi[i], qi[j])[0]
    assert len(A.basis) == 6


@pytest.mark.parametrize("family,n", [("partition", 2), ("temperley-lieb", 3), ("jones", 3)])
def test_table_matches_compose(family, n):
    aid = algebra_id(family, n)
    A = get_algebra(aid)
    t = build_table(aid)
    for i, j in itertools.product(range(len(A.basis)), repeat=2):
        d, e = compose(A.basis[i], A.basis[j])
        assert t.entry(i, j) == (A.index_of(d), e)


def _check_assoc(aid, triples, ring):
    for i, j, k in triples:
        x, y, z = (AlgebraElement.basis_element(aid, a) for a in (i, j, k))
        lhs = multiply(multiply(x, y, ring), z, ring)
        rhs = multiply(x, multiply(y, z, ring), ring)
        assert lhs.equals(rhs, ring)


@pytest.mark.parametrize("family,n", [("partition", 2), ("temperley-lieb", 3), ("jones", 3)])
def test_multiply_associative_exhaustive(family, n):
    aid = algebra_id(family, n)
    N = len(get_algebra(aid).basis)
    for ring in RINGS[:3]:
        _check_assoc(aid, itertools.product(range(N), repeat=3), ring)


@pytest.mark.parametrize("family,n", [("partition", 3), ("jones", 4)])
def test_multiply_associative_random(family, n):
    aid = algebra_id(family, n)
    N = len(get_algebra(aid).basis)
    rng = random.Random(11)
    triples = [tuple(rng.randrange(N) for _ in range(3)) for _ in range(1000)]
    for ring in RINGS:
        _check_assoc(aid, triples, ring)


def test_associativity_on_general_elements():
    aid = algebra_id("partition", 2)
    rng = random.Random(5)
    ring = CoefficientRing.integers(-2)
    for _ in range(30):
        x, y, z = (AlgebraElement(aid, {rng.randrange(15): rng.randint(-3, 3) for _ in range(3)}) for _ in range(3))
        assert multiply(multiply(x, y, ring), z, ring).equals(multiply(x, multiply(y, z, ring), ring), ring)


@pytest.mark.parametrize("family,n", [("partition", 2), ("jones", 3), ("jones", 4)])
def test_augmentation_is_multiplicative(family, n):
    aid = algebra_id(family, n)
    A = get_algebra(aid)
    t = build_table(aid)
    N = len(A.basis)
    # full times full has no loops and stays full
    full = np.flatnonzero(A.full)
    assert not t.loops[np.ix_(full, full)].any()
    for ring in (Z, CoefficientRing.integers(0), F5.with_delta(2)):
        for i, j in itertools.product(range(N), repeat=2):
            x, y = AlgebraElement.basis_element(aid, i), AlgebraElement.basis_element(aid, j)
            assert augmentation(multiply(x, y, ring), ring) == ring.mul(augmentation(x, ring), augmentation(y, ring))


# -- quotient -----------------------------------------------------------------------------


def test_quotient_examples():
    aid = algebra_id("jones", 2)
    one = AlgebraElement.unit(aid)
    assert quotient_map(one, Z).coeffs == {0: 1}
    assert quotient_map(AlgebraElement.from_diagram(aid, e2()), Z).is_zero


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_full_annular_diagrams_biject_with_rotations(n):
    qi = quotient_indices(algebra_id("jones", n))
    images = [k for k in qi if k is not None]
    assert sorted(images) == list(range(n))


@pytest.mark.parametrize("family,n", [("partition", 2), ("jones", 3), ("brauer", 3)])
def test_quotient_is_homomorphism_and_intertwines_augmentation(family, n):
    aid = algebra_id(family, n)
    N = len(get_algebra(aid).basis)
    for ring in (Z, CoefficientRing.integers(1)):
        for i, j in itertools.product(range(N), repeat=2):
            x, y = AlgebraElement.basis_element(aid, i), AlgebraElement.basis_element(aid, j)
            lhs = quotient_map(multiply(x, y, ring), ring)
            rhs = multiply(quotient_map(x, ring), quotient_map(y, ring), ring)
            assert lhs.equals(rhs, ring)
            assert augmentation(quotient_map(x, ring), ring) == augmentation(x, ring)


# -- subalgebras ------------------------------------------------------------------------


@pytest.mark.parametrize(
    "sub,ambient,n",
    [("temperley-lieb", "brauer", 4), ("jones", "brauer", 4), ("brauer", "partition", 3), ("temperley-lieb", "partition", 3), ("jones", "partition", 3)],
)
def test_subalgebra_closure(sub, ambient, n):
    small = set(enumerate_basis(sub, n))
    big = set(enumerate_basis(ambient, n))
    assert small <= big
    for a, b in itertools.product(small, repeat=2):
        assert compose(a, b)[0] in small


# -- cache ---------------------------------------------------------------------------------


def test_table_cache_round_trip(tmp_path):
    aid = algebra_id("jones", 3)
    t = build_table(aid)
    save_table(t, tmp_path)
    back = load_table(aid, tmp_path)
    assert np.array_equal(back.product, t.product) and np.array_equal(back.loops, t.loops)
    assert back.digest == get_algebra(aid).digest


def test_cache_digest_mismatch_is_rejected(tmp_path):
    aid = algebra_id("jones", 3)
    save_table(build_table(aid), tmp_path)
    side = tmp_path / "jones-3.json"
    meta = json.loads(side.read_text())
    meta["digest"] = "0" * 64
    side.write_text(json.dumps(meta))
    with pytest.raises(CacheError):
        load_table(aid, tmp_path)


def test_cache_truncation_is_rejected(tmp_path):
    aid = algebra_id("temperley-lieb", 3)
    path = save_table(build_table(aid), tmp_path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(CacheError):
        load_table(aid, tmp_path)


def test_table_budget():
    with pytest.raises(BudgetExceeded) as exc:
        build_table(algebra_id("partition", 4), budget=1000, attach=False)
    assert exc.value.required == 4140**2


def test_identity_is_unit_index():
    for fam, n in [("partition", 3), ("jones", 5), ("brauer", 2)]:
        A = get_algebra(algebra_id(fam, n))
        assert A.basis[A.unit] == identity(n)
