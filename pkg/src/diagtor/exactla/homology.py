"""Homology of chain complexes and maps induced on homology.

Conventions: ``d_q`` maps degree ``q`` to degree ``q - 1`` and is stored as a
``dim C_{q-1} x dim C_q`` matrix, so ``d_q @ d_{q+1} == 0``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from ..errors import DimensionError, NotAChainMapError, NotAComplexError, UnsupportedRingError
from . import fieldla
from .intla import ColumnReduction, IntegerLattice
from .rings import INTEGERS, CoefficientRing
from .snf import invariant_factors, smith_normal_form
from .sparse import SparseMatrix


@dataclass(frozen=True)
class HomologyGroup:
    """``Z^free_rank + Z/d_1 + ... + Z/d_k`` (or a vector space of that dimension).

    Over ``Zmod:m`` summands isomorphic to the whole ring are counted in
    ``free_rank`` and the remaining cyclic summands are listed as torsion.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        t = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in t):
            raise ValueError(f"torsion factors must be >= 2, got {t}")
        if any(t[k + 1] % t[k] for k in range(len(t) - 1)):
            raise ValueError(f"torsion factors {t} do not form a divisibility chain")
        object.__setattr__(self, "torsion", t)

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def dimension_mod(self, p: int) -> int:
        """Dimension of this group tensored with F_p."""
        return self.free_rank + sum(1 for d in self.torsion if d % p == 0)

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    @classmethod
    def from_dict(cls, d: Mapping) -> HomologyGroup:
        return cls(int(d["free_rank"]), tuple(d.get("torsion", ())))

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    def render(self, ring: CoefficientRing) -> str:
        """Like ``str`` but names the free summand after the ring."""
        if ring.kind == INTEGERS:
            return str(self)
        base = {"Q": "Q", "Fp": f"F_{ring.modulus}", "Zmod": f"Z/{ring.modulus}"}[ring.kind]
        parts = []
        if self.free_rank:
            parts.append(base if self.free_rank == 1 else f"({base})^{self.free_rank}" if ring.kind == "Zmod" else f"{base}^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def _check_pair(d_q: SparseMatrix, d_q1: SparseMatrix, ring: CoefficientRing) -> None:
    if d_q.ncols != d_q1.nrows:
        raise DimensionError(f"differentials {d_q.shape} and {d_q1.shape} do not compose")
    if not d_q.matmul(d_q1, ring).is_zero():
        raise NotAComplexError("d_q @ d_{q+1} is nonzero")


def chain_homology(d_q: SparseMatrix, d_q1: SparseMatrix, ring: CoefficientRing, check: bool = True) -> HomologyGroup:
    """``ker d_q / im d_{q+1}`` over ``ring``."""
    if check:
        _check_pair(d_q, d_q1, ring)
    else:
        if d_q.ncols != d_q1.nrows:
            raise DimensionError(f"differentials {d_q.shape} and {d_q1.shape} do not compose")
    n = d_q.ncols
    if ring.is_field:
        r1 = fieldla.rank(d_q, ring)
        r2 = fieldla.rank(d_q1, ring)
        return HomologyGroup(n - r1 - r2)
    if ring.kind == INTEGERS:
        r1 = ColumnReduction(d_q).rank if d_q.nnz else 0
        facs = invariant_factors(d_q1)
        free = n - r1 - len(facs)
        return HomologyGroup(free, tuple(d for d in facs if d > 1))
    return _modular_homology(d_q, d_q1, ring.modulus)


def _modular_homology(d_q: SparseMatrix, d_q1: SparseMatrix, m: int) -> HomologyGroup:
    # cycles: the lattice {x in Z^n : d_q x = 0 mod m}; boundaries: im d_{q+1} + m Z^n
    n = d_q.ncols
    rows = d_q.nrows
    aug = d_q.hstack(SparseMatrix._trusted(rows, rows, [{i: m} for i in range(rows)]))
    lat = IntegerLattice()
    for z in ColumnReduction(aug).kernel:
        lat.add({i: v for i, v in z.items() if i < n})
    for i in range(n):
        lat.add({i: m})
    basis_idx = sorted(lat.pivots)
    basis = SparseMatrix._trusted(n, len(basis_idx), [dict(lat.pivots[i]) for i in basis_idx])
    solver = ColumnReduction(basis)
    rel_cols = []
    for c in d_q1.columns():
        rel_cols.append(solver.solve(c))
    for i in range(n):
        rel_cols.append(solver.solve({i: m}))
    rel = SparseMatrix(len(basis_idx), len(rel_cols), rel_cols)
    facs = [d for d in invariant_factors(rel) if d > 1]
    free = sum(1 for d in facs if d == m) + (len(basis_idx) - len(invariant_factors(rel)))
    return HomologyGroup(free, tuple(d for d in facs if d != m))


# -- presentations used for induced maps --------------------------------------


class _IntegralPresentation:
    """SNF-adapted coordinates on ``H = ker d_q / im d_{q+1}`` over Z."""

    def __init__(self, d_q: SparseMatrix, d_q1: SparseMatrix):
        self.cr = ColumnReduction(d_q, track_inverse=True)
        kernel = self.cr.kernel
        k = len(kernel)
        rel_cols = [self._kcoords(c) for c in d_q1.columns()]
        rel = SparseMatrix(k, len(rel_cols), rel_cols)
        snf = smith_normal_form(rel)
        r = snf.rank
        factors = list(snf.diagonal) + [0] * (k - r)
        self.components = [i for i in range(k) if factors[i] != 1]
        self.factors = [factors[i] for i in self.components]
        self.left = snf.left
        self.group = HomologyGroup(k - r, tuple(f for f in self.factors if f))
        linv = snf.left_inverse
        self.generators = []
        for i in self.components:
            z: dict = {}
            for t, v in linv.column(i).items():
                for idx, w in kernel[t].items():
                    z[idx] = z.get(idx, 0) + v * w
            self.generators.append({a: b for a, b in z.items() if b})

    def _kcoords(self, z: Mapping) -> dict:
        return {i: v for i, v in enumerate(self.cr.kernel_coordinates(z)) if v}

    def coordinates(self, z: Mapping) -> list[int]:
        y = self.left.apply(self._kcoords(z))
        out = []
        for i, f in zip(self.components, self.factors):
            v = y.get(i, 0)
            out.append(v % f if f else v)
        return out


class _FieldPresentation:
    def __init__(self, d_q: SparseMatrix, d_q1: SparseMatrix, ring: CoefficientRing):
        self.ring = ring
        _, kernel = fieldla.rank_kernel(d_q, ring)
        ech = fieldla.FieldEchelon(ring, track=True)
        for j, c in enumerate(d_q1.columns()):
            c = fieldla._reduced(c, ring)
            if c:
                ech.add(c, label=("b", j))
        self.generators = []
        for z in kernel:
            if ech.add(z, label=("h", len(self.generators))):
                self.generators.append(z)
        self.ech = ech
        self.group = HomologyGroup(len(self.generators))
        self.factors = [0] * len(self.generators)

    def coordinates(self, z: Mapping) -> list:
        res, coords = self.ech.reduce(fieldla._reduced(z, self.ring))
        if res:
            raise ValueError("vector is not a cycle")
        out = [self.ring.zero] * len(self.generators)
        for lab, v in coords.items():
            if lab[0] == "h":
                out[lab[1]] = v
        return out


def _presentation(d_q, d_q1, ring):
    if ring.is_field:
        return _FieldPresentation(d_q, d_q1, ring)
    if ring.kind == INTEGERS:
        return _IntegralPresentation(d_q, d_q1)
    raise UnsupportedRingError(f"induced maps are not implemented over {ring.spec}")


@dataclass
class InducedMap:
    """Matrix of a map on homology with its classification.

    Over Z the rows and columns index the nontrivial cyclic summands of the
    SNF-adapted decompositions (free summands first reported as factor 0).
    """

    matrix: SparseMatrix
    source: HomologyGroup
    target: HomologyGroup
    source_factors: list[int]
    target_factors: list[int]
    injective: bool
    surjective: bool
    ring: CoefficientRing = field(repr=False)

    @property
    def classification(self) -> str:
        if self.injective and self.surjective:
            return "isomorphism"
        if self.surjective:
            return "surjective_not_injective"
        return "neither"

    @property
    def is_isomorphism(self) -> bool:
        return self.injective and self.surjective


def _classify_integral(phi: SparseMatrix, src_f: list[int], tgt_f: list[int]) -> tuple[bool, bool]:
    t, s = len(tgt_f), len(src_f)
    rel_cols = [{j: f} for j, f in enumerate(tgt_f) if f]
    rel = SparseMatrix._trusted(t, len(rel_cols), rel_cols)
    both = phi.hstack(rel)
    facs = invariant_factors(both) if both.nnz else []
    surjective = len(facs) == t and all(f == 1 for f in facs)
    injective = True
    for z in ColumnReduction(both).kernel:
        for i in range(s):
            v = z.get(i, 0)
            f = src_f[i]
            if (f == 0 and v != 0) or (f and v % f):
                injective = False
                break
        if not injective:
            break
    return injective, surjective


def homology_induced_map(
    source: tuple[SparseMatrix, SparseMatrix],
    target: tuple[SparseMatrix, SparseMatrix],
    maps: Mapping[int, SparseMatrix] | tuple,
    ring: CoefficientRing,
    check: bool = True,
) -> InducedMap:
    """Map on ``H_q`` induced by a chain map.

    ``source`` and ``target`` are the pairs ``(d_q, d_{q+1})``. ``maps`` gives
    the chain map at degrees ``q-1, q, q+1`` as a tuple or as a dict keyed by
    the offsets ``-1, 0, 1``; only the degree-``q`` component is required,
    the others are used to check that the squares commute.
    """
    if isinstance(maps, tuple):
        maps = {off: f for off, f in zip((-1, 0, 1), maps) if f is not None}
    d_q, d_q1 = source
    e_q, e_q1 = target
    f = maps[0]
    if f.shape != (e_q.ncols, d_q.ncols):
        raise DimensionError(f"chain map of shape {f.shape} does not fit {d_q.shape} -> {e_q.shape}")
    if check:
        _check_pair(d_q, d_q1, ring)
        _check_pair(e_q, e_q1, ring)
        if -1 in maps and not e_q.matmul(f, ring).equals(maps[-1].matmul(d_q, ring), ring):
            raise NotAChainMapError("square at degree q does not commute")
        if 1 in maps and not e_q1.matmul(maps[1], ring).equals(f.matmul(d_q1, ring), ring):
            raise NotAChainMapError("square at degree q+1 does not commute")
    src = _presentation(d_q, d_q1, ring)
    tgt = _presentation(e_q, e_q1, ring)
    cols = []
    for g in src.generators:
        coords = tgt.coordinates(f.apply(g, None if ring.kind == INTEGERS else ring))
        cols.append({i: v for i, v in enumerate(coords) if v})
    phi = SparseMatrix._trusted(len(tgt.generators), len(src.generators), cols)
    if ring.is_field:
        r = fieldla.rank(phi, ring)
        inj, surj = r == len(src.generators), r == len(tgt.generators)
    else:
        inj, surj = _classify_integral(phi, src.factors, tgt.factors)
    return InducedMap(phi, src.group, tgt.group, list(src.factors), list(tgt.factors), inj, surj, ring)


# -- complexes ---------------------------------------------------------------


class ChainComplex:
    """Graded free modules with sparse differentials.

    ``dims[q]`` is the rank in degree ``q`` and ``differentials[q]`` the map
    ``C_q -> C_{q-1}``; missing differentials are zero.
    """

    def __init__(self, dims: Mapping[int, int], differentials: Mapping[int, SparseMatrix], labels=None):
        self.dims = dict(dims)
        self.differentials = dict(differentials)
        self.labels = labels or {}
        for q, d in self.differentials.items():
            want = (self.dims.get(q - 1, 0), self.dims.get(q, 0))
            if d.shape != want:
                raise DimensionError(f"d_{q} has shape {d.shape}, expected {want}")

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def d(self, q: int) -> SparseMatrix:
        m = self.differentials.get(q)
        if m is None:
            return SparseMatrix.zeros(self.dims.get(q - 1, 0), self.dims.get(q, 0))
        return m

    def check_square_zero(self, ring: CoefficientRing | None = None) -> bool:
        ring = ring or CoefficientRing.integers()
        for q in self.degrees:
            if not self.d(q).matmul(self.d(q + 1), ring).is_zero():
                return False
        return True

    def homology(self, q: int, ring: CoefficientRing, check: bool = True) -> HomologyGroup:
        return chain_homology(self.d(q), self.d(q + 1), ring, check=check)

    def homology_all(self, ring: CoefficientRing, check: bool = True) -> dict[int, HomologyGroup]:
        return {q: self.homology(q, ring, check) for q in self.degrees}


__all__ = [
    "HomologyGroup",
    "chain_homology",
    "homology_induced_map",
    "InducedMap",
    "ChainComplex",
]
