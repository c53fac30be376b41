"""Reduced (normalized) bar complex of an augmented diagram or group algebra.

Degree q has basis the q-tuples of augmentation-ideal basis elements,
indexed in mixed radix with the first factor most significant. The
differential is

    d(a_1 | ... | a_q) = sum_{i=1}^{q-1} (-1)^i a_1 | ... | a_i a_{i+1} | ... | a_q,

the outer terms vanishing because both coefficient modules are trivial.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..algebra import AlgebraId, algebra_id, quotient_indices
from ..errors import BudgetExceeded, PreconditionError
from ..exactla.homology import HomologyGroup, chain_homology
from ..exactla.rings import CoefficientRing
from ..exactla.sparse import SparseMatrix
from .augideal import AugmentationIdeal, augmentation_ideal

DEFAULT_BAR_BUDGET = 5_000_000
# above this many columns a field rank goes through the compiled kernel
COMPILED_RANK_THRESHOLD = 200_000


def _coefficient_table(ideal: AugmentationIdeal, ring: CoefficientRing) -> np.ndarray:
    """``C[s, t]`` = delta^e for the product term of ``u_s u_t``."""
    E = ideal.E
    emax = int(E.max()) if E.size else 0
    vals = [ring.delta_power(e) for e in range(emax + 1)]
    small = all(type(v) is int and abs(v) < 2**40 for v in vals)
    return np.array(vals, dtype=np.int64 if small else object)[E]


def _tuple_digits(q: int, m: int) -> list[np.ndarray]:
    idx = np.arange(m**q, dtype=np.int64)
    out = []
    for k in range(q):
        out.append((idx // m ** (q - 1 - k)) % m)
    return out


@dataclass
class BarComplex:
    algebra: AlgebraId
    ring: CoefficientRing
    q_max: int
    ideal: AugmentationIdeal = field(repr=False)
    budget: int | None = DEFAULT_BAR_BUDGET
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return self.ideal.dim

    def rank(self, q: int) -> int:
        """Rank of the degree-q free module."""
        if q < 0:
            return 0
        return self.m**q

    @property
    def top(self) -> int:
        """Highest degree whose module is assembled (q_max + 1)."""
        return self.q_max + 1

    def _check_degree(self, q: int) -> None:
        if q > self.top:
            raise PreconditionError(f"degree {q} exceeds the assembled range {self.top}")

    def tuple_label(self, q: int, j: int) -> str:
        m = self.m
        parts = []
        for k in range(q):
            parts.append(self.ideal.label((j // m ** (q - 1 - k)) % m))
        return " | ".join(parts) if parts else "[]"

    def triplets(self, q: int):
        """Entries of ``d_q`` as arrays ``(rows, cols, vals)`` (duplicates not summed)."""
        self._check_degree(q)
        m = self.m
        if q <= 1 or m == 0:
            z = np.zeros(0, dtype=np.int64)
            return z, z, z
        K, eps = self.ideal.K, self.ideal.eps
        C = _coefficient_table(self.ideal, self.ring)
        dig = _tuple_digits(q, m)
        cols_all = np.arange(m**q, dtype=np.int64)
        R, Cc, V = [], [], []
        for i in range(q - 1):
            sign = -1 if i % 2 == 0 else 1
            sw = m ** (q - 2 - i)
            pre = np.zeros(m**q, dtype=np.int64)
            for k in range(i):
                pre = pre * m + dig[k]
            suf = np.zeros(m**q, dtype=np.int64)
            for k in range(i + 2, q):
                suf = suf * m + dig[k]
            base = pre * m * sw + suf
            u, w = dig[i], dig[i + 1]
            kk = K[u, w]
            c = C[u, w]
            ok = kk >= 0
            if C.dtype != object:
                ok &= c != 0
            R.append(base[ok] + kk[ok] * sw)
            Cc.append(cols_all[ok])
            V.append(sign * c[ok])
            sel = eps[w] != 0
            R.append(base[sel] + u[sel] * sw)
            Cc.append(cols_all[sel])
            V.append(np.full(int(sel.sum()), -sign, dtype=np.int64))
            sel = eps[u] != 0
            R.append(base[sel] + w[sel] * sw)
            Cc.append(cols_all[sel])
            V.append(np.full(int(sel.sum()), -sign, dtype=np.int64))
        rows = np.concatenate(R)
        cols = np.concatenate(Cc)
        vals = np.concatenate([v.astype(object) if C.dtype == object else v for v in V])
        return rows, cols, vals

    def d(self, q: int) -> SparseMatrix:
        """``d_q : B_q -> B_{q-1}`` as a sparse matrix over the ring."""
        if q in self._cache:
            return self._cache[q]
        self._check_degree(q)
        nr, nc = self.rank(q - 1), self.rank(q)
        if q <= 1:
            mat = SparseMatrix.zeros(nr, nc)
        else:
            rows, cols, vals = self.triplets(q)
            ring = self.ring
            colsd: list[dict] = [{} for _ in range(nc)]
            for i, j, v in zip(rows.tolist(), cols.tolist(), vals.tolist()):
                c = colsd[j]
                c[i] = c.get(i, 0) + v
            for c in colsd:
                for i in list(c):
                    x = ring.reduce(c[i])
                    if x:
                        c[i] = x
                    else:
                        del c[i]
            mat = SparseMatrix._trusted(nr, nc, colsd)
        self._cache[q] = mat
        return mat

    def check_square_zero(self) -> bool:
        for q in range(2, self.top + 1):
            if not self.d(q - 1).matmul(self.d(q), self.ring).is_zero():
                return False
        return True

    def _field_rank(self, q: int) -> int:
        if q <= 1 or self.m == 0:
            return 0
        ring = self.ring
        if ring.modulus and self.rank(q) > COMPILED_RANK_THRESHOLD:
            from ._barkern import bar_rank_modp

            p = ring.modulus
            C = _coefficient_table(self.ideal, ring).astype(np.int64) % p
            return int(bar_rank_modp(q, self.m, self.ideal.K, C, self.ideal.eps, p, self.rank(q - 1), -1))
        from ..exactla import fieldla

        return fieldla.rank(self.d(q), ring)

    def homology(self, q: int) -> HomologyGroup:
        if q == 0:
            return HomologyGroup(1)
        self._check_degree(q + 1)
        if self.ring.is_field:
            return HomologyGroup(self.rank(q) - self._field_rank(q) - self._field_rank(q + 1))
        return chain_homology(self.d(q), self.d(q + 1), self.ring, check=False)

    def homology_all(self) -> list[HomologyGroup]:
        return [self.homology(q) for q in range(self.q_max + 1)]


def reduced_bar(algebra, ring: CoefficientRing, q_max: int, budget: int | None = DEFAULT_BAR_BUDGET) -> BarComplex:
    """Reduced bar complex assembled through degree ``q_max + 1``."""
    aid = algebra if isinstance(algebra, AlgebraId) else algebra_id(*algebra)
    if q_max < 0:
        raise PreconditionError("q_max must be nonnegative")
    ideal = augmentation_ideal(aid)
    need = ideal.dim ** (q_max + 1)
    if budget is not None and need > budget:
        raise BudgetExceeded(f"bar complex of {aid} in degree {q_max + 1}", need, budget)
    return BarComplex(aid, ring, q_max, ideal, budget)


def bar_chain_map(bar: BarComplex, target: BarComplex, q: int) -> SparseMatrix:
    """Degree-q component of the chain map induced by the quotient to the group algebra.

    An ideal basis element maps to 0 (non-full diagram), to 0 (a full diagram
    sent to the identity) or to a single target ideal basis element.
    """
    src_ideal, tgt_ideal = bar.ideal, target.ideal
    if bar.algebra.quotient == target.algebra:
        qi = quotient_indices(bar.algebra)
        image = np.array(
            [-1 if qi[int(i)] is None else int(tgt_ideal.position[qi[int(i)]]) for i in src_ideal.members],
            dtype=np.int64,
        )
    elif bar.algebra == target.algebra:
        image = np.arange(src_ideal.dim, dtype=np.int64)
    else:
        raise PreconditionError(f"no quotient map {bar.algebra} -> {target.algebra}")
    return tensor_power_map(image, src_ideal.dim, tgt_ideal.dim, q)


def tensor_power_map(image: np.ndarray, m: int, mt: int, q: int) -> SparseMatrix:
    """q-th tensor power of a map sending basis vector s to ``image[s]`` (or 0 if -1)."""
    if q == 0:
        return SparseMatrix.identity(1)
    dig = _tuple_digits(q, m)
    target = np.zeros(m**q, dtype=np.int64)
    alive = np.ones(m**q, dtype=bool)
    for k in range(q):
        t = image[dig[k]]
        alive &= t >= 0
        target = target * mt + np.where(t >= 0, t, 0)
    cols = [{int(t): 1} if a else {} for t, a in zip(target.tolist(), alive.tolist())]
    return SparseMatrix._trusted(mt**q, m**q, cols)


def quotient_image(aid: AlgebraId) -> np.ndarray:
    """Ideal-basis image of each ideal basis element of ``aid`` in its group quotient."""
    src = augmentation_ideal(aid)
    tgt = augmentation_ideal(aid.quotient)
    qi = quotient_indices(aid)
    return np.array(
        [-1 if qi[int(i)] is None else int(tgt.position[qi[int(i)]]) for i in src.members],
        dtype=np.int64,
    )
