"""Left ideals of diagram algebras, their intersections, and idempotent generators.

Ideals are spans of basis subsets. Tags name them: ``("K", i)`` and
``("L", i, j)`` in the partition algebra, ``("J", i)`` in the Jones annular
algebra, ``("I",)`` for the span of non-full-propagation diagrams. All labels
are 1-based; for the Jones family ``i + 1`` is read cyclically in 1..n.
"""

from __future__ import annotations

import itertools
import json
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgebraElement, AlgebraFamily, AlgebraId, get_algebra, multiply
from .diagrams import SetPartition, compose
from .errors import CertificateError, DiagtorError, DimensionError, ObstructionError, PreconditionError
from .exactla.rings import CoefficientRing

Tag = tuple


def _partition_id(n: int) -> AlgebraId:
    return AlgebraId(AlgebraFamily.PARTITION, n)


def _jones_id(n: int) -> AlgebraId:
    return AlgebraId(AlgebraFamily.JONES_ANNULAR, n)


def _succ(i: int, n: int) -> int:
    return i % n + 1


def _pred(i: int, n: int) -> int:
    return (i - 2) % n + 1


@dataclass(frozen=True)
class LeftIdealSpan:
    """Span of a set of basis diagrams; ``tags`` lists the ideals intersected."""

    algebra: AlgebraId
    basis: frozenset
    tags: tuple = ()

    @property
    def is_zero(self) -> bool:
        return not self.basis

    @property
    def size(self) -> int:
        return len(self.basis)

    def sorted_basis(self) -> list[int]:
        return sorted(self.basis)

    def contains_element(self, x: AlgebraElement) -> bool:
        return all(i in self.basis for i in x.coeffs)

    def label(self) -> str:
        if not self.tags:
            return "A"
        return "&".join(_tag_str(t) for t in self.tags)

    def __repr__(self) -> str:
        return f"LeftIdealSpan({self.algebra}, {self.label()}, size={self.size})"


def _tag_str(t: Tag) -> str:
    return t[0] + ("(" + ",".join(str(x) for x in t[1:]) + ")" if len(t) > 1 else "")


# -- membership predicates -------------------------------------------------------


def _same_block(d: SetPartition, u: int, v: int) -> bool:
    return d.rgs[u] == d.rgs[v]


def _singleton(d: SetPartition, u: int) -> bool:
    return d.rgs.count(d.rgs[u]) == 1


def tag_predicate(tag: Tag, n: int):
    """Membership test on a basis diagram for a single tag."""
    kind = tag[0]
    if kind == "K":
        v = n + tag[1] - 1
        return lambda d: _singleton(d, v)
    if kind == "L":
        u, v = n + tag[1] - 1, n + tag[2] - 1
        return lambda d: _same_block(d, u, v)
    if kind == "J":
        u, v = n + tag[1] - 1, n + _succ(tag[1], n) - 1
        return lambda d: _same_block(d, u, v)
    if kind == "I":
        return lambda d: d.propagating_number() < n
    raise PreconditionError(f"unknown ideal tag {tag!r}")


def _check_tag(tag: Tag, aid: AlgebraId) -> None:
    n = aid.n
    kind = tag[0]
    if kind in ("K", "L") and aid.family is not AlgebraFamily.PARTITION:
        raise PreconditionError(f"{kind} ideals live in the partition algebra")
    if kind == "J" and aid.family is not AlgebraFamily.JONES_ANNULAR:
        raise PreconditionError("J ideals live in the Jones annular algebra")
    if kind == "K" and not 1 <= tag[1] <= n:
        raise DimensionError(f"K index {tag[1]} out of range 1..{n}")
    if kind == "L" and not 1 <= tag[1] < tag[2] <= n:
        raise DimensionError(f"L indices {tag[1:]} must satisfy 1 <= i < j <= {n}")
    if kind == "J" and n < 2:
        raise DimensionError("J ideals need at least two points")
    if kind == "J" and not 1 <= tag[1] <= n:
        raise DimensionError(f"J index {tag[1]} out of range 1..{n}")


def ideal_from_tag(aid: AlgebraId, tag: Tag) -> LeftIdealSpan:
    _check_tag(tag, aid)
    A = get_algebra(aid)
    pred = tag_predicate(tag, aid.n)
    return LeftIdealSpan(aid, frozenset(i for i, d in enumerate(A.basis) if pred(d)), (tuple(tag),))


def ideal_K(i: int, n: int) -> LeftIdealSpan:
    return ideal_from_tag(_partition_id(n), ("K", i))


def ideal_L(i: int, j: int, n: int) -> LeftIdealSpan:
    return ideal_from_tag(_partition_id(n), ("L", i, j))


def ideal_J(i: int, n: int) -> LeftIdealSpan:
    i = (i - 1) % n + 1
    return ideal_from_tag(_jones_id(n), ("J", i))


def I_leq(aid: AlgebraId) -> LeftIdealSpan:
    """Span of diagrams with propagating number below n (a twosided ideal)."""
    A = get_algebra(aid)
    return LeftIdealSpan(aid, frozenset(i for i in range(len(A.basis)) if not A.full[i]), (("I",),))


def is_left_closed(ideal: LeftIdealSpan) -> bool:
    """Every product ``x * rho`` with ``rho`` in the span lands in the span."""
    A = get_algebra(ideal.algebra)
    if ideal.is_zero:
        return True
    members = np.array(ideal.sorted_basis())
    mask = np.zeros(len(A.basis), dtype=bool)
    mask[members] = True
    everything = np.arange(len(A.basis))
    step = max(1, 500_000 // len(members))
    for s in range(0, len(everything), step):
        prod, _ = A.products_block(everything[s:s + step], members)
        if not mask[prod].all():
            return False
    return True


# -- intersections ------------------------------------------------------------------


def partition_intersection_is_zero(S: Iterable[int], T: Iterable[tuple[int, int]]) -> bool:
    s = set(S)
    return any(i in s or j in s for i, j in T)


def is_innermost(T: Iterable[int], n: int) -> bool:
    """No two distinct elements of T are cyclically adjacent in C_n."""
    t = set(T)
    return not any(_succ(i, n) in t and _succ(i, n) != i for i in t)


def moral_support(T: Iterable[int], n: int) -> frozenset:
    t = set(T)
    return frozenset(t | {_succ(i, n) for i in t})


def locally_minimal(b: int, S: Iterable[int], n: int) -> bool:
    s = set(S)
    return b in s and _pred(b, n) not in s


def pick_a(T: Iterable[int], n: int) -> int | None:
    """Least ``a`` with ``a + 2`` locally minimal in the complement of MS(T); None if MS(T) = C_n."""
    comp = set(range(1, n + 1)) - moral_support(T, n)
    if not comp:
        return None
    for a in range(1, n + 1):
        if locally_minimal(_succ(_succ(a, n), n), comp, n):
            return a
    return None


def _split_tags(tags: Sequence[Tag]):
    S = sorted({t[1] for t in tags if t[0] == "K"})
    T = sorted({(t[1], t[2]) for t in tags if t[0] == "L"})
    J = sorted({t[1] for t in tags if t[0] == "J"})
    return S, T, J


def intersect(ideals: Sequence[LeftIdealSpan]) -> LeftIdealSpan:
    """Basis-level intersection, cross-checked against the closed-form description."""
    if not ideals:
        raise PreconditionError("intersect needs at least one ideal")
    aid = ideals[0].algebra
    if any(I.algebra != aid for I in ideals):
        raise DimensionError("ideals of different algebras")
    basis = frozenset.intersection(*(I.basis for I in ideals))
    tags = tuple(sorted({t for I in ideals for t in I.tags}))
    if all(t[0] in ("K", "L", "J") for t in tags):
        A = get_algebra(aid)
        preds = [tag_predicate(t, aid.n) for t in tags]
        direct = frozenset(i for i, d in enumerate(A.basis) if all(p(d) for p in preds))
        if direct != basis:
            raise DiagtorError(f"intersection {tags} disagrees with its predicate description")
        S, T, J = _split_tags(tags)
        if aid.family is AlgebraFamily.PARTITION:
            expect_zero = partition_intersection_is_zero(S, T)
        elif aid.n >= 3:
            expect_zero = not is_innermost(J, aid.n)
        else:
            # on two points J_1 and J_2 are the same ideal, so adjacency says nothing
            expect_zero = not basis
        if expect_zero != (not basis):
            raise DiagtorError(f"zero test for {tags} disagrees with the combinatorial criterion")
    return LeftIdealSpan(aid, basis, tags)


def intersect_tags(aid: AlgebraId, tags: Sequence[Tag]) -> LeftIdealSpan:
    return intersect([ideal_from_tag(aid, t) for t in tags])


# -- retraction elements ----------------------------------------------------------------


def _mu_diagram(a: int, b: int, n: int) -> SetPartition:
    blocks = [[f"{a}'"], [a, b, f"{b}'"]] + [[i, f"{i}'"] for i in range(1, n + 1) if i not in (a, b)]
    return SetPartition.from_blocks(n, blocks)


def build_mu(S: Iterable[int], T: Iterable[tuple[int, int]], a: int, b: int, n: int) -> AlgebraElement:
    """Single partition with parts {a'}, {a, b, b'} and {i, i'} otherwise."""
    s = set(S)
    if not (1 <= a <= n and 1 <= b <= n):
        raise PreconditionError("labels out of range")
    if a in s:
        raise PreconditionError(f"a = {a} already lies in S")
    if len(s | {a}) >= n:
        raise PreconditionError("S together with a must be a proper subset")
    if b in s or b == a:
        raise PreconditionError(f"b = {b} must avoid S and a")
    return AlgebraElement.from_diagram(_partition_id(n), _mu_diagram(a, b, n))


def build_nu(a: int, b: int, n: int, T: Iterable[tuple[int, int]] = ()) -> AlgebraElement:
    """Single partition with parts {a, b, a', b'} and {i, i'} otherwise."""
    if not 1 <= a < b <= n:
        raise PreconditionError("need 1 <= a < b <= n")
    if (a, b) in set(T):
        raise PreconditionError(f"({a}, {b}) already lies in T")
    blocks = [[a, b, f"{a}'", f"{b}'"]] + [[i, f"{i}'"] for i in range(1, n + 1) if i not in (a, b)]
    return AlgebraElement.from_diagram(_partition_id(n), SetPartition.from_blocks(n, blocks))


def _omega_diagram(a: int, n: int) -> SetPartition:
    a1, a2 = _succ(a, n), _succ(_succ(a, n), n)
    blocks = [[a2, a1], [a, f"{a2}'"], [f"{a1}'", f"{a}'"]]
    blocks += [[i, f"{i}'"] for i in range(1, n + 1) if i not in (a, a1, a2)]
    return SetPartition.from_blocks(n, blocks)


def build_omega(a: int, n: int, T: Iterable[int] | None = None) -> AlgebraElement:
    """The annular diagram joining a+2 to a+1, a to (a+2)', (a+1)' to a', and i to i' elsewhere."""
    if n < 3:
        raise PreconditionError("omega needs n >= 3")
    if not 1 <= a <= n:
        raise PreconditionError(f"a = {a} out of range")
    if T is not None:
        comp = set(range(1, n + 1)) - moral_support(T, n)
        if not locally_minimal(_succ(_succ(a, n), n), comp, n):
            raise PreconditionError(f"a + 2 is not locally minimal in the complement of MS({sorted(T)})")
    return AlgebraElement.from_diagram(_jones_id(n), _omega_diagram(a, n))


# -- certificates -------------------------------------------------------------------------


@dataclass
class IdempotentCertificate:
    ideal: LeftIdealSpan
    generator: AlgebraElement
    construction_chain: list[dict]
    ring: CoefficientRing
    checks: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "algebra": str(self.ideal.algebra),
            "ideal": [list(t) for t in self.ideal.tags],
            "ideal_size": self.ideal.size,
            "ring": self.ring.spec,
            "delta": str(self.ring.delta),
            "construction_chain": self.construction_chain,
            "generator": self.generator.to_text(),
            "checks": self.checks,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _product_of_diagrams(diagrams: Sequence[SetPartition]) -> tuple[SetPartition, int]:
    cur, loops = diagrams[0], 0
    for d in diagrams[1:]:
        cur, e = compose(cur, d)
        loops += e
    return cur, loops


def verify_certificate(ideal: LeftIdealSpan, gen: AlgebraElement, ring: CoefficientRing) -> dict:
    """The three checks witnessing that ``gen`` generates ``ideal`` as an idempotent."""
    A = get_algebra(ideal.algebra)
    in_span = ideal.contains_element(gen)
    squared = multiply(gen, gen, ring).equals(gen, ring)
    members = np.array(ideal.sorted_basis(), dtype=np.int64)
    support = sorted(gen.coeffs)
    # rho * e = rho for every basis rho of the ideal
    fixes = True
    prods = {j: A.products_block(members, [j]) for j in support}
    for r, i in enumerate(members):
        acc: dict = {}
        for j in support:
            k, e = int(prods[j][0][r, 0]), int(prods[j][1][r, 0])
            c = ring.mul(ring.reduce(gen.coeffs[j]), ring.delta_power(e))
            if c:
                acc[k] = ring.add(acc.get(k, ring.zero), c)
        acc = {k: v for k, v in acc.items() if ring.reduce(v)}
        if acc != {int(i): ring.one}:
            fixes = False
            break
    # A * e lies in the ideal
    mask = np.zeros(len(A.basis), dtype=bool)
    mask[members] = True
    closed = True
    everything = np.arange(len(A.basis))
    for j in support:
        k, e = A.products_block(everything, [j])
        coeff_nonzero = np.array([bool(ring.mul(ring.reduce(gen.coeffs[j]), ring.delta_power(int(x)))) for x in range(int(e.max()) + 1)]) if e.size else np.array([True])
        live = coeff_nonzero[e[:, 0]]
        if not mask[k[:, 0][live]].all():
            closed = False
            break
    return {"in_ideal": in_span, "idempotent": squared, "right_identity_on_ideal": fixes, "left_multiples_in_ideal": closed}


def _certify(ideal: LeftIdealSpan, gen: AlgebraElement, chain: list[dict], ring: CoefficientRing) -> IdempotentCertificate:
    checks = verify_certificate(ideal, gen, ring)
    if not all(checks.values()):
        raise CertificateError(f"generator for {ideal.label()} failed verification: {checks}")
    return IdempotentCertificate(ideal, gen, chain, ring, checks)


def synthesize_partition_idempotent(n: int, S: Iterable[int], T: Iterable[tuple[int, int]], ring: CoefficientRing) -> IdempotentCertificate:
    """Generator of the intersection of K_i (i in S) and L_{i,j} ((i, j) in T)."""
    S = sorted(set(S))
    T = sorted({tuple(sorted(t)) for t in T})
    aid = _partition_id(n)
    tags = [("K", i) for i in S] + [("L", i, j) for i, j in T]
    ideal = intersect_tags(aid, tags) if tags else LeftIdealSpan(aid, frozenset(range(len(get_algebra(aid).basis))), ())
    if ideal.is_zero:
        raise PreconditionError(f"the intersection {ideal.label()} is zero")
    if len(S) == n:
        raise ObstructionError("S is all of 1..n: no retraction element exists")
    chain: list[dict] = []
    diagrams: list[SetPartition] = []
    done_T: list[tuple[int, int]] = []
    for a, b in T:
        chain.append({"kind": "nu", "a": a, "b": b, "n": n})
        diagrams.append(_diagram_of(build_nu(a, b, n, done_T)))
        done_T.append((a, b))
    done_S: list[int] = []
    for a in S:
        b = min(x for x in range(1, n + 1) if x not in done_S and x != a)
        chain.append({"kind": "mu", "S": list(done_S), "a": a, "b": b, "n": n})
        diagrams.append(_diagram_of(build_mu(done_S, done_T, a, b, n)))
        done_S.append(a)
    return _finish(aid, ideal, diagrams, chain, ring)


def _diagram_of(x: AlgebraElement) -> SetPartition:
    (i,) = x.coeffs
    return get_algebra(x.algebra).basis[i]


def _finish(aid, ideal, diagrams, chain, ring, scale=None) -> IdempotentCertificate:
    A = get_algebra(aid)
    if diagrams:
        d, loops = _product_of_diagrams(diagrams)
        coeff = ring.delta_power(loops)
        gen = AlgebraElement(aid, {A.index_of(d): coeff})
    else:
        gen = AlgebraElement.unit(A)
    if scale is not None:
        gen = gen.scale(scale, ring)
    return _certify(ideal, gen, chain, ring)


def jones_obstructed(T: Iterable[int], n: int) -> bool:
    t = set(T)
    return n % 2 == 0 and is_innermost(t, n) and moral_support(t, n) == frozenset(range(1, n + 1))


def synthesize_jones_idempotent(n: int, T: Iterable[int], ring: CoefficientRing) -> IdempotentCertificate:
    """Generator of the intersection of J_i for i in T."""
    T = sorted({(i - 1) % n + 1 for i in T})
    aid = _jones_id(n)
    tags = [("J", i) for i in T]
    ideal = intersect_tags(aid, tags) if tags else LeftIdealSpan(aid, frozenset(range(len(get_algebra(aid).basis))), ())
    if ideal.is_zero:
        raise PreconditionError(f"the intersection {ideal.label()} is zero (T is not innermost)")
    if jones_obstructed(T, n):
        if not ring.is_unit(ring.delta):
            raise ObstructionError(f"T = {T} covers C_{n} and delta = {ring.delta} is not invertible")
        return _jones_invertible_delta(n, T, ideal, ring)
    chain: list[dict] = []
    cur = list(T)
    picks = []
    while cur:
        a = pick_a(cur, n)
        if a is None or a not in cur:
            raise CertificateError(f"no retraction step for T = {cur}")
        picks.append((a, list(cur)))
        cur.remove(a)
    # the retraction onto the smallest intersection is applied first
    diagrams = []
    for a, cur_T in reversed(picks):
        chain.append({"kind": "omega", "a": a, "T": cur_T, "n": n})
        diagrams.append(_diagram_of(build_omega(a, n, cur_T)))
    return _finish(aid, ideal, diagrams, chain, ring)


def _jones_invertible_delta(n: int, T: list[int], ideal: LeftIdealSpan, ring: CoefficientRing) -> IdempotentCertificate:
    arcs = [[i, _succ(i, n)] for i in T]
    blocks = arcs + [[f"{a}'", f"{b}'"] for a, b in arcs]
    x = SetPartition.from_blocks(n, blocks)
    _, k = compose(x, x)
    A = get_algebra(_jones_id(n))
    inv = ring.inverse(ring.delta_power(k))
    gen = AlgebraElement(A.id, {A.index_of(x): inv})
    chain = [{"kind": "scaled_cup_cap", "T": list(T), "n": n, "loops": k, "scale": str(inv)}]
    return _certify(ideal, gen, chain, ring)


def synthesize_idempotent(aid: AlgebraId, tags: Sequence[Tag], ring: CoefficientRing) -> IdempotentCertificate:
    for t in tags:
        _check_tag(t, aid)
    S, T, J = _split_tags(tags)
    if aid.family is AlgebraFamily.PARTITION:
        return synthesize_partition_idempotent(aid.n, S, T, ring)
    if aid.family is AlgebraFamily.JONES_ANNULAR:
        return synthesize_jones_idempotent(aid.n, J, ring)
    raise PreconditionError(f"no cover construction for {aid}")


# -- covers -------------------------------------------------------------------------------


@dataclass
class CoverDescriptor:
    algebra: AlgebraId
    ideals: list[LeftIdealSpan]
    target: LeftIdealSpan
    height: int

    def __post_init__(self):
        if not 1 <= self.height <= self.width:
            raise PreconditionError(f"height {self.height} must lie in 1..{self.width}")

    @property
    def width(self) -> int:
        return len(self.ideals)

    @property
    def tags(self) -> list[Tag]:
        return [I.tags[0] for I in self.ideals]

    def subsets(self, max_size: int | None = None):
        """Nonempty index subsets (0-based), lexicographic within each size."""
        top = self.width if max_size is None else max_size
        for p in range(1, top + 1):
            yield from itertools.combinations(range(self.width), p)


def partition_cover(n: int, height: int | None = None) -> CoverDescriptor:
    aid = _partition_id(n)
    tags = [("K", i) for i in range(1, n + 1)] + [("L", i, j) for i, j in itertools.combinations(range(1, n + 1), 2)]
    ideals = [ideal_from_tag(aid, t) for t in tags]
    return CoverDescriptor(aid, ideals, I_leq(aid), n - 1 if height is None else height)


def jones_cover(n: int, height: int | None = None) -> CoverDescriptor:
    """Cover by J_1..J_n; default height is full width for odd n, n/2 - 1 for even n."""
    aid = _jones_id(n)
    ideals = [ideal_from_tag(aid, ("J", i)) for i in range(1, n + 1)]
    if height is None:
        height = n if n % 2 else max(1, n // 2 - 1)
    return CoverDescriptor(aid, ideals, I_leq(aid), height)


def cover_for(family, n: int, height: int | None = None) -> CoverDescriptor:
    fam = family if isinstance(family, AlgebraFamily) else AlgebraFamily.parse(str(family))
    if fam is AlgebraFamily.PARTITION:
        return partition_cover(n, height)
    if fam is AlgebraFamily.JONES_ANNULAR:
        return jones_cover(n, height)
    raise PreconditionError(f"no cover is constructed for the {fam.value} family")


def verify_cover(cover: CoverDescriptor, ring: CoefficientRing | None = None) -> dict:
    """Cover identity plus a zero-or-idempotent status for every subset up to the height."""
    ring = ring or CoefficientRing.integers(0)
    union = frozenset().union(*(I.basis for I in cover.ideals))
    union_ok = union == cover.target.basis
    entries = []
    for sub in cover.subsets(cover.height):
        tags = [cover.ideals[k].tags[0] for k in sub]
        inter = intersect([cover.ideals[k] for k in sub])
        entry = {"subset": [_tag_str(t) for t in tags], "size": inter.size}
        if inter.is_zero:
            entry["status"] = "zero"
        else:
            try:
                cert = synthesize_idempotent(cover.algebra, tags, ring)
                entry["status"] = "idempotent"
                entry["generator"] = cert.generator.to_text()
                entry["chain"] = cert.construction_chain
            except ObstructionError as exc:
                entry["status"] = "obstructed"
                entry["detail"] = str(exc)
            except CertificateError as exc:
                entry["status"] = "fail"
                entry["detail"] = str(exc)
        entries.append(entry)
    passed = union_ok and all(e["status"] in ("zero", "idempotent") for e in entries)
    return {
        "algebra": str(cover.algebra),
        "ring": ring.spec,
        "delta": str(ring.delta),
        "width": cover.width,
        "height": cover.height,
        "cover_identity": union_ok,
        "subsets": entries,
        "pass": passed,
    }
