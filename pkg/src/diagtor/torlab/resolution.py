"""Free resolutions of the trivial module and comparison maps between them.

``F_q = A^{g_q}`` as left modules. An element of ``F_q`` is a dict keyed by
``j * N + b`` (generator j, basis diagram b). The boundary is fixed by the
images ``v_i = d(e_i)`` of the generators and acts by ``d(b e_i) = b v_i``.
Generators of each kernel are picked greedily until their A-span equals the
kernel (over Z: as lattices), so ``F`` is exact but not necessarily minimal.
``Tor_q`` is the homology of ``1 (x)_A F``, whose differential applies the
augmentation to each coefficient of ``v_i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..algebra import AlgebraId, algebra_id, build_table, get_algebra, quotient_indices
from ..errors import BudgetExceeded, NotAChainMapError, PreconditionError, UnsupportedRingError
from ..exactla import fieldla
from ..exactla.homology import HomologyGroup, chain_homology
from ..exactla.intla import ColumnReduction, IntegerLattice
from ..exactla.rings import CoefficientRing
from ..exactla.sparse import SparseMatrix

DEFAULT_RESOLUTION_BUDGET = 400_000


class _Mult:
    """Left multiplication by basis diagrams on free modules, over a ring."""

    def __init__(self, aid: AlgebraId, ring: CoefficientRing):
        A = get_algebra(aid)
        if A.table is None:
            build_table(aid)
        self.A = A
        self.N = len(A.basis)
        self.ring = ring
        self.prod = A.table.product.tolist()
        self.loops = A.table.loops.tolist()
        self.full = [bool(x) for x in A.full]
        self.unit = A.unit

    def left(self, b: int, z: dict) -> dict:
        N, ring = self.N, self.ring
        pr, lp = self.prod[b], self.loops[b]
        out: dict = {}
        for key, c in z.items():
            j, d = divmod(key, N)
            e = lp[d]
            w = c if e == 0 else ring.mul(c, ring.delta_power(e))
            if not w:
                continue
            k = j * N + pr[d]
            out[k] = ring.add(out.get(k, ring.zero), w)
        return {k: v for k, v in out.items() if v}

    def augment(self, z: dict) -> dict:
        """Generator-wise augmentation ``A^g -> R^g``."""
        N, ring = self.N, self.ring
        out: dict = {}
        for key, c in z.items():
            j, d = divmod(key, N)
            if self.full[d]:
                out[j] = ring.add(out.get(j, ring.zero), c)
        return {k: v for k, v in out.items() if v}


class _Span:
    """Growing span (field) or lattice (Z) of vectors."""

    def __init__(self, ring: CoefficientRing):
        self.ring = ring
        self.field = ring.is_field
        self.ech = fieldla.FieldEchelon(ring) if self.field else IntegerLattice()

    @property
    def rank(self) -> int:
        return self.ech.rank

    def add(self, v: dict) -> bool:
        return self.ech.add(v)

    def contains(self, v: dict) -> bool:
        return self.ech.contains(v)


@dataclass
class FreeResolution:
    algebra: AlgebraId
    ring: CoefficientRing
    images: list = field(default_factory=list)  # images[q][i] = d(e_i) in F_{q-1}, for q >= 1
    budget: int | None = DEFAULT_RESOLUTION_BUDGET
    _mult: _Mult | None = field(default=None, repr=False)
    _bmat: dict = field(default_factory=dict, repr=False)
    _solver: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self._mult is None:
            self._mult = _Mult(self.algebra, self.ring)

    @property
    def N(self) -> int:
        return self._mult.N

    @property
    def length(self) -> int:
        return len(self.images)

    def generators(self, q: int) -> int:
        if q == 0:
            return 1
        return len(self.images[q - 1])

    def boundary(self, q: int) -> SparseMatrix:
        """``d_q : F_q -> F_{q-1}`` as an R-matrix (columns ``i * N + b``)."""
        if q in self._bmat:
            return self._bmat[q]
        N, mult = self.N, self._mult
        cols = []
        for v in self.images[q - 1]:
            for b in range(N):
                cols.append(mult.left(b, v))
        mat = SparseMatrix._trusted(N * self.generators(q - 1), N * self.generators(q), cols)
        self._bmat[q] = mat
        return mat

    def _kernel(self, q: int) -> list[dict]:
        ring = self.ring
        if q == 0:
            A = self._mult.A
            out = []
            for i in range(self.N):
                if i == A.unit:
                    continue
                out.append({i: ring.one, A.unit: ring.neg(ring.one)} if A.full[i] else {i: ring.one})
            return out
        d = self.boundary(q)
        if ring.is_field:
            return fieldla.rank_kernel(d, ring)[1]
        return ColumnReduction(d).kernel

    def extend(self) -> None:
        """Append one more term: generators for the kernel of the last boundary."""
        q = self.length
        ker = self._kernel(q)
        mult = self._mult
        span = _Span(self.ring)
        target = len(ker)
        gens: list[dict] = []
        for z in sorted(ker, key=lambda v: (len(v), sorted(v))):
            if self.ring.is_field and span.rank >= target:
                break
            if span.contains(z):
                continue
            gens.append(z)
            for b in range(self.N):
                w = mult.left(b, z)
                if w:
                    span.add(w)
            if self.budget is not None and self.N * len(gens) > self.budget:
                raise BudgetExceeded(f"resolution of {self.algebra} in degree {q + 1}", self.N * len(gens), self.budget)
        self.images.append(gens)

    def extend_to(self, length: int) -> FreeResolution:
        while self.length < length:
            self.extend()
        return self

    def tensored(self, q: int) -> SparseMatrix:
        """Differential of ``1 (x)_A F`` in degree q."""
        if q <= 0:
            return SparseMatrix.zeros(self.generators(q - 1) if q > 0 else 0, self.generators(q) if q >= 0 else 0)
        mult = self._mult
        cols = [mult.augment(v) for v in self.images[q - 1]]
        return SparseMatrix._trusted(self.generators(q - 1), self.generators(q), cols)

    def check_exact(self, upto: int) -> bool:
        """Boundaries compose to zero and the augmentation kills im d_1."""
        ring = self.ring
        for q in range(2, min(upto, self.length) + 1):
            if not self.boundary(q - 1).matmul(self.boundary(q), ring).is_zero():
                return False
        if self.length >= 1:
            for v in self.images[0]:
                if mult_eps(self._mult, v, ring):
                    return False
        return True

    def tor(self, q_max: int) -> list[HomologyGroup]:
        self.extend_to(q_max + 1)
        out = []
        for q in range(q_max + 1):
            out.append(chain_homology(self.tensored(q), self.tensored(q + 1), self.ring, check=False))
        return out

    def solve(self, q: int, target: dict) -> dict:
        """Some ``y`` in ``F_q`` with ``d_q y = target`` (target must be a boundary)."""
        ring = self.ring
        if q not in self._solver:
            d = self.boundary(q)
            if ring.is_field:
                ech = fieldla.FieldEchelon(ring, track=True)
                for j, c in enumerate(d.columns()):
                    if c:
                        ech.add(c, label=j)
                self._solver[q] = ech
            else:
                self._solver[q] = ColumnReduction(d)
        s = self._solver[q]
        if ring.is_field:
            res, coords = s.reduce(target)
            if res:
                raise NotAChainMapError(f"lift to degree {q} does not exist")
            return {k: v for k, v in coords.items() if v}
        y = s.solve(target)
        if y is None:
            raise NotAChainMapError(f"lift to degree {q} does not exist over Z")
        return y


def mult_eps(mult: _Mult, z: dict, ring: CoefficientRing):
    s = ring.zero
    for key, c in z.items():
        if mult.full[key % mult.N]:
            s = ring.add(s, c)
    return s


def _require_resolution_ring(ring: CoefficientRing) -> None:
    if not (ring.is_field or ring.kind == "Z"):
        raise UnsupportedRingError(f"free resolutions need a field or Z, got {ring.spec}")


def free_resolution(algebra, ring: CoefficientRing, length: int, budget: int | None = DEFAULT_RESOLUTION_BUDGET) -> FreeResolution:
    aid = algebra if isinstance(algebra, AlgebraId) else algebra_id(*algebra)
    _require_resolution_ring(ring)
    return FreeResolution(aid, ring, budget=budget).extend_to(length)


def cyclic_periodic_resolution(n: int, ring: CoefficientRing, length: int) -> FreeResolution:
    """``... -> RC_n --N--> RC_n --(g-1)--> RC_n``, written as a FreeResolution."""
    _require_resolution_ring(ring)
    aid = algebra_id("cyclic", n)
    one = ring.one
    minus = {1 % n: one}
    minus[0] = ring.sub(minus[0], one) if n == 1 else ring.neg(one)
    minus = {k: v for k, v in minus.items() if v}
    norm = {k: one for k in range(n)}
    images = [[dict(minus) if q % 2 == 0 else dict(norm)] for q in range(length)]
    return FreeResolution(aid, ring, images=images)


def minimal_resolution_betti(algebra, ring: CoefficientRing, q_max: int, budget: int | None = DEFAULT_RESOLUTION_BUDGET) -> list[int]:
    """``dim Tor_q`` for q <= q_max, from a free resolution over a field."""
    if not ring.is_field:
        raise PreconditionError(f"Betti numbers need a field, got {ring.spec}")
    res = free_resolution(algebra, ring, q_max + 1, budget)
    return [g.free_rank for g in res.tor(q_max)]


class ComparisonMap:
    """A-linear lift ``F -> G`` of the identity of 1 along ``A -> B``.

    ``F`` resolves 1 over the diagram algebra and ``G`` over its group
    quotient (or ``G = F`` for the identity map).
    """

    def __init__(self, F: FreeResolution, G: FreeResolution):
        if F.ring != G.ring:
            raise PreconditionError("resolutions over different rings")
        self.F, self.G = F, G
        self.ring = F.ring
        if F.algebra == G.algebra:
            self._pi = list(range(F.N))
        elif F.algebra.quotient == G.algebra:
            self._pi = list(quotient_indices(F.algebra))
        else:
            raise PreconditionError(f"no quotient map {F.algebra} -> {G.algebra}")
        self.lifts: list[list[dict]] = [[{G._mult.unit: self.ring.one}]]

    def _apply(self, q: int, z: dict) -> dict:
        """phi_q on an element of F_q."""
        N, ring, gm = self.F.N, self.ring, self.G._mult
        out: dict = {}
        for key, c in z.items():
            i, b = divmod(key, N)
            g = self._pi[b]
            if g is None:
                continue
            for k, v in gm.left(g, self.lifts[q][i]).items():
                out[k] = ring.add(out.get(k, ring.zero), ring.mul(c, v))
        return {k: v for k, v in out.items() if v}

    def extend_to(self, q_max: int) -> ComparisonMap:
        self.F.extend_to(q_max)
        self.G.extend_to(q_max)
        while len(self.lifts) <= q_max:
            q = len(self.lifts)
            row = []
            for v in self.F.images[q - 1]:
                row.append(self.G.solve(q, self._apply(q - 1, v)))
            self.lifts.append(row)
        return self

    def tensored(self, q: int) -> SparseMatrix:
        """Induced map ``1 (x)_A F_q -> 1 (x)_B G_q``."""
        self.extend_to(q)
        gm = self.G._mult
        cols = [gm.augment(y) for y in self.lifts[q]]
        return SparseMatrix._trusted(self.G.generators(q), self.F.generators(q), cols)
