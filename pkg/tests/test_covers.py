import itertools

import pytest

from diagtor.algebra import AlgebraElement, algebra_id, get_algebra, multiply
from diagtor.covers import (
    I_leq,
    build_mu,
    build_nu,
    build_omega,
    ideal_J,
    ideal_K,
    ideal_L,
    intersect,
    is_innermost,
    is_left_closed,
    jones_cover,
    moral_support,
    partition_cover,
    partition_intersection_is_zero,
    pick_a,
    synthesize_idempotent,
    synthesize_jones_idempotent,
    synthesize_partition_idempotent,
    verify_certificate,
    verify_cover,
)
from diagtor.diagrams import SetPartition, identity
from diagtor.errors import DimensionError, ObstructionError, PreconditionError
from diagtor.exactla.rings import CoefficientRing

Z = CoefficientRing.integers()


def diagram(n, *blocks):
    return SetPartition.from_blocks(n, [list(b) for b in blocks])


# -- ideals --------------------------------------------------------------------------


def test_k1_membership():
    A = get_algebra(algebra_id("partition", 2))
    K1 = ideal_K(1, 2)
    assert A.index_of(diagram(2, (1, 2, "2'"), ("1'",))) in K1.basis
    assert A.unit not in K1.basis


def test_l12_size():
    assert ideal_L(1, 2, 2).size == 5


@pytest.mark.parametrize("n", [2, 3])
def test_partition_ideals_lie_in_i_leq(n):
    target = I_leq(algebra_id("partition", n)).basis
    for I in partition_cover(n).ideals:
        assert I.basis <= target


def test_j1_for_two_strands():
    A = get_algebra(algebra_id("jones", 2))
    assert ideal_J(1, 2).basis == {A.index_of(diagram(2, (1, 2), ("1'", "2'")))}


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_jones_ideals_cover_i_leq(n):
    cover = jones_cover(n)
    target = I_leq(cover.algebra).basis
    assert all(I.basis <= target for I in cover.ideals)
    assert frozenset().union(*(I.basis for I in cover.ideals)) == target


def test_index_errors():
    with pytest.raises(DimensionError):
        ideal_L(2, 1, 3)
    with pytest.raises(DimensionError):
        ideal_K(4, 3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_partition_ideals_are_left_closed(n):
    for I in partition_cover(n).ideals if n > 1 else [ideal_K(1, 1)]:
        assert is_left_closed(I)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_jones_ideals_are_left_closed(n):
    for i in range(1, n + 1):
        assert is_left_closed(ideal_J(i, n))


def _brute_left_closed(I):
    A = get_algebra(I.algebra)
    for x in range(len(A.basis)):
        for v in I.basis:
            k, _ = A.product(x, v)
            if k not in I.basis:
                return False
    return True


def test_left_closure_brute_force_agrees():
    for I in partition_cover(2).ideals + jones_cover(4).ideals:
        assert _brute_left_closed(I)
    fake = ideal_J(1, 3)
    assert not _brute_left_closed(type(fake)(fake.algebra, fake.basis | {get_algebra(fake.algebra).unit}))


# -- intersections ------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3])
def test_k_meets_l_in_zero(n):
    assert intersect([ideal_K(1, n), ideal_L(1, 2, n)]).is_zero


def test_jones_intersection_examples():
    assert intersect([ideal_J(1, 6), ideal_J(2, 6)]).is_zero
    inter = intersect([ideal_J(i, 6) for i in (1, 3, 5)])
    assert not inter.is_zero
    A = get_algebra(algebra_id("jones", 6))
    witness = diagram(6, (1, 2), (3, 4), (5, 6), ("1'", "2'"), ("3'", "4'"), ("5'", "6'"))
    assert A.index_of(witness) in inter.basis


@pytest.mark.parametrize("n", [2, 3])
def test_partition_intersections_match_predicate(n):
    cover = partition_cover(n)
    for sub in cover.subsets():
        tags = [cover.ideals[k].tags[0] for k in sub]
        S = [t[1] for t in tags if t[0] == "K"]
        T = [t[1:] for t in tags if t[0] == "L"]
        inter = intersect([cover.ideals[k] for k in sub])
        assert inter.is_zero == partition_intersection_is_zero(S, T)


def test_two_point_jones_ideals_coincide():
    assert ideal_J(1, 2).basis == ideal_J(2, 2).basis
    assert not intersect([ideal_J(1, 2), ideal_J(2, 2)]).is_zero
    with pytest.raises(DimensionError):
        ideal_J(1, 1)


@pytest.mark.parametrize("n", range(3, 9))
def test_innermost_iff_nonzero(n):
    ideals = [ideal_J(i, n) for i in range(1, n + 1)]
    for r in range(1, n + 1):
        for T in itertools.combinations(range(1, n + 1), r):
            nonzero = not intersect([ideals[i - 1] for i in T]).is_zero
            assert nonzero == is_innermost(T, n), T


def test_innermost_examples():
    assert is_innermost({1, 3}, 6)
    assert moral_support({1, 3}, 6) == {1, 2, 3, 4}
    assert pick_a({1, 3}, 6) == 3
    assert not is_innermost({1, 2}, 6)
    assert is_innermost({1, 3, 5, 7}, 8)
    assert moral_support({1, 3, 5, 7}, 8) == set(range(1, 9))
    assert pick_a({1, 3, 5, 7}, 8) is None


@pytest.mark.parametrize("n", range(3, 9))
def test_pick_a_meets_its_contract(n):
    for r in range(1, n):
        for T in itertools.combinations(range(1, n + 1), r):
            if not is_innermost(T, n):
                continue
            ms = moral_support(T, n)
            a = pick_a(T, n)
            if len(ms) == n:
                assert a is None
                continue
            comp = set(range(1, n + 1)) - ms
            b = (a + 1) % n + 1  # a + 2 in C_n
            prev = (b - 2) % n + 1
            assert b in comp and prev not in comp


# -- retraction elements ----------------------------------------------------------------


def test_build_mu_block_list():
    mu = build_mu((), (), 1, 2, 4)
    expect = diagram(4, ("1'",), (1, 2, "2'"), (3, "3'"), (4, "4'"))
    assert mu.equals(AlgebraElement.from_diagram(algebra_id("partition", 4), expect), Z)


def test_build_nu_block_list():
    nu = build_nu(1, 3, 3)
    expect = diagram(3, (1, 3, "1'", "3'"), (2, "2'"))
    assert nu.equals(AlgebraElement.from_diagram(algebra_id("partition", 3), expect), Z)


def test_build_omega_figure():
    om = build_omega(3, 8)
    blocks = [(5, 4), (3, "5'"), ("4'", "3'")] + [(i, f"{i}'") for i in (6, 7, 8, 1, 2)]
    expect = diagram(8, *blocks)
    assert om.equals(AlgebraElement.from_diagram(algebra_id("jones", 8), expect), Z)


def test_build_mu_preconditions():
    with pytest.raises(PreconditionError):
        build_mu({1}, (), 1, 2, 3)


# -- idempotents --------------------------------------------------------------------------


def test_jones_single_ideal_generator():
    cert = synthesize_jones_idempotent(4, {1}, Z)
    e = cert.generator
    assert multiply(e, e, Z).equals(e, Z)
    a = pick_a({1}, 4)
    assert cert.construction_chain == [{"kind": "omega", "a": a, "T": [1], "n": 4}]
    assert e.equals(build_omega(a, 4, {1}), Z)


def test_partition_k1_generator_fixes_every_member():
    ring = Z
    cert = synthesize_partition_idempotent(3, {1}, (), ring)
    K1 = ideal_K(1, 3)
    assert K1.size == 52
    e = cert.generator
    for i in K1.basis:
        rho = AlgebraElement.basis_element(K1.algebra, i)
        assert multiply(rho, e, ring).equals(rho, ring)


def test_jones_obstruction_at_delta_zero():
    with pytest.raises(ObstructionError):
        synthesize_jones_idempotent(4, {1, 3}, Z)


@pytest.mark.parametrize("delta,ring", [(1, "Z"), (2, "Q"), (1, "Fp:2"), (2, "Fp:3")])
def test_jones_invertible_delta_construction(delta, ring):
    R = CoefficientRing.parse(ring, delta)
    for n, T in [(4, {1, 3}), (4, {2, 4}), (6, {2, 4, 6})]:
        cert = synthesize_jones_idempotent(n, T, R)
        assert all(cert.checks.values())


def test_certificate_checks_reject_non_idempotent():
    I = ideal_J(1, 3)
    A = get_algebra(I.algebra)
    bogus = AlgebraElement.basis_element(I.algebra, A.unit)
    checks = verify_certificate(I, bogus, Z)
    assert not all(checks.values())


def test_certificate_json():
    cert = synthesize_idempotent(algebra_id("jones", 5), [("J", 1), ("J", 3)], Z)
    data = cert.to_json()
    assert data["ideal"] == [["J", 1], ["J", 3]]
    assert all(isinstance(t["coeff"], str) for t in data["generator"])
    assert cert.dumps() == cert.dumps()


# -- covers ---------------------------------------------------------------------------------


def _all_pass(report):
    return report["pass"] and report["cover_identity"] and all(e["status"] in ("zero", "idempotent") for e in report["subsets"])


def test_partition_three_cover_height_two():
    rep = verify_cover(partition_cover(3, 2))
    assert _all_pass(rep)


def test_jones_six_cover_height_two():
    rep = verify_cover(jones_cover(6, 2))
    assert _all_pass(rep)
    assert rep["height"] == 2


def test_jones_five_full_width():
    cover = jones_cover(5)
    assert cover.height == 5
    rep = verify_cover(cover)
    assert _all_pass(rep)
    assert len(rep["subsets"]) == 2**5 - 1


def test_jones_four_above_height_is_obstructed():
    rep = verify_cover(jones_cover(4, 2))
    statuses = {tuple(e["subset"]): e["status"] for e in rep["subsets"]}
    assert statuses[("J(1)", "J(3)")] == "obstructed"
    assert not rep["pass"]
    assert _all_pass(verify_cover(jones_cover(4, 2), CoefficientRing.integers(1)))


def test_identity_not_in_i_leq():
    for n in (2, 3, 4):
        aid = algebra_id("jones", n)
        assert get_algebra(aid).index_of(identity(n)) not in I_leq(aid).basis
