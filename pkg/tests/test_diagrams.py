import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagtor.diagrams import (
    Family,
    SetPartition,
    build_annular,
    compose,
    decompose_annular,
    enumerate_basis,
    identity,
    is_annular,
    link_states,
    propagating_number,
)
from diagtor.errors import DimensionError


def naive_compose(mu, nu):
    """Union-find on bottom/middle/top copies; independent of the library kernel."""
    n = mu.n
    parent = list(range(3 * n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def join(a, b):
        parent[find(a)] = find(b)

    # mu on rows (bottom, middle); nu on rows (middle, top)
    for block in mu.blocks:
        for a, b in zip(block, block[1:]):
            join(a, b)
    for block in nu.blocks:
        shifted = [v + n for v in block]
        for a, b in zip(shifted, shifted[1:]):
            join(a, b)
    outer = list(range(n)) + list(range(2 * n, 3 * n))
    roots = {}
    blocks = []
    for v in outer:
        r = find(v)
        if r not in roots:
            roots[r] = len(blocks)
            blocks.append([])
        blocks[roots[r]].append(v if v < n else v - n)
    used = {find(v) for v in outer}
    loops = len({find(v) for v in range(n, 2 * n)} - used)
    return SetPartition.from_index_blocks(n, blocks), loops


BELL = {1: 2, 2: 15, 3: 203}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_partition_basis_is_bell(n):
    assert len(enumerate_basis(Family.PARTITION, n)) == BELL[n]


@pytest.mark.parametrize("n,catalan", [(1, 1), (2, 2), (3, 5), (4, 14), (5, 42)])
def test_temperley_lieb_is_catalan(n, catalan):
    assert len(enumerate_basis("tl", n)) == catalan


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_brauer_is_double_factorial(n):
    expect = 1
    for k in range(1, 2 * n, 2):
        expect *= k
    assert len(enumerate_basis("brauer", n)) == expect


def test_jones_small():
    basis = enumerate_basis("jones", 2)
    assert len(basis) == 3
    e = SetPartition.from_blocks(2, [[1, 2], ["1'", "2'"]])
    swap = SetPartition.from_blocks(2, [[1, "2'"], [2, "1'"]])
    assert set(basis) == {identity(2), swap, e}


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_jones_dimension_counts_triples(n):
    # sum over t of |M(t)|^2 times the number of rotations (one when t = 0)
    expect = sum(len(link_states(n, t)) ** 2 * max(t, 1) for t in range(n + 1))
    assert len(enumerate_basis("jones", n)) == expect


def test_basis_is_sorted_and_unique():
    for fam in Family:
        b = enumerate_basis(fam, 3)
        assert b == sorted(b, key=SetPartition.sort_key)
        assert len(set(b)) == len(b)


def test_enumerate_rejects_zero():
    with pytest.raises(DimensionError):
        enumerate_basis("partition", 0)


# -- composition -----------------------------------------------------------------------


def test_compose_with_identity():
    for rho in enumerate_basis("partition", 2):
        assert compose(rho, identity(2)) == (rho, 0)
        assert compose(identity(2), rho) == (rho, 0)


def test_e_squared_has_one_loop():
    e = SetPartition.from_blocks(2, [[1, 2], ["1'", "2'"]])
    assert compose(e, e) == (e, 1)


def test_worked_j11_product(j11_example):
    alpha, beta, product = j11_example
    assert all(is_annular(d) for d in (alpha, beta, product))
    assert compose(alpha, beta) == (product, 1)
    assert naive_compose(alpha, beta) == (product, 1)


def test_compose_mismatched_sizes():
    with pytest.raises(DimensionError):
        compose(identity(2), identity(3))


@pytest.mark.parametrize("family,n", [("partition", 2), ("brauer", 3), ("jones", 3)])
def test_compose_matches_naive_exhaustive(family, n):
    basis = enumerate_basis(family, n)
    for mu, nu in itertools.product(basis, repeat=2):
        assert compose(mu, nu) == naive_compose(mu, nu)


def _assoc(a, b, c):
    ab, e1 = compose(a, b)
    left, e2 = compose(ab, c)
    bc, e3 = compose(b, c)
    right, e4 = compose(a, bc)
    return left == right and e1 + e2 == e3 + e4


@pytest.mark.parametrize("family,n", [("partition", 2), ("jones", 3)])
def test_associativity_exhaustive(family, n):
    basis = enumerate_basis(family, n)
    assert all(_assoc(a, b, c) for a, b, c in itertools.product(basis, repeat=3))


@pytest.mark.parametrize("family,n", [("partition", 3), ("jones", 4)])
def test_associativity_random(family, n):
    basis = enumerate_basis(family, n)
    rng = random.Random(2024)
    for _ in range(1000):
        assert _assoc(*(rng.choice(basis) for _ in range(3)))


P3 = enumerate_basis("partition", 3)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(P3), st.sampled_from(P3))
def test_propagating_number_does_not_grow(mu, nu):
    prod, _ = compose(mu, nu)
    assert propagating_number(prod) <= min(propagating_number(mu), propagating_number(nu))


# -- propagating number -----------------------------------------------------------------


def test_propagating_examples():
    assert propagating_number(identity(4)) == 4
    assert propagating_number(SetPartition.from_blocks(2, [[1, 2], ["1'", "2'"]])) == 0
    full = [d for d in enumerate_basis("partition", 2) if propagating_number(d) == 2]
    assert len(full) == 2 and all(d.permutation() is not None for d in full)


# -- annular link states ----------------------------------------------------------------


def test_link_states_examples():
    assert len(link_states(5, 5)) == 1
    assert link_states(3, 2) == []
    four = link_states(4, 2)
    assert len(four) == 4
    assert sorted(s.arcs for s in four) == sorted([((1, 2),), ((2, 3),), ((3, 4),), ((1, 4),)])


def test_build_annular_examples():
    full = link_states(3, 3)[0]
    assert build_annular(full, full, 0) == identity(3)
    cup = link_states(2, 0)[0]
    assert build_annular(cup, cup, 0) == SetPartition.from_blocks(2, [[1, 2], ["1'", "2'"]])


def test_decompose_identity_and_transposition():
    d = decompose_annular(identity(3))
    assert d.rotation == 0 and d.bottom.t == 3 and d.top.t == 3
    swap = SetPartition.from_blocks(3, [[1, "2'"], [2, "1'"], [3, "3'"]])
    assert decompose_annular(swap) is None


def _triples(n):
    for t in range(n % 2, n + 1, 2):
        states = link_states(n, t)
        for p in states:
            for q in states:
                for s in range(max(t, 1)):
                    yield p, q, s


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_annular_round_trip(n):
    seen = set()
    for p, q, s in _triples(n):
        rho = build_annular(p, q, s)
        d = decompose_annular(rho)
        assert (d.bottom, d.top, d.rotation) == (p, q, s)
        seen.add(rho)
    assert len(seen) == sum(1 for _ in _triples(n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_annular_inside_brauer(n):
    jones = set(enumerate_basis("jones", n))
    for d in enumerate_basis("brauer", n):
        assert is_annular(d) == (d in jones)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_temperley_lieb_inside_jones(n):
    jones = set(enumerate_basis("jones", n))
    assert set(enumerate_basis("tl", n)) <= jones


def test_parse_and_print_round_trip():
    for d in enumerate_basis("partition", 2):
        assert SetPartition.parse(str(d), 2) == d
