"""The augmentation ideal with its explicit splitting ``A = R.1 + ker(eps)``.

Basis of ``ker(eps)``: every basis diagram ``b`` other than the unit, read as
``b`` itself when ``b`` has propagating number below n and as ``b - 1``
otherwise. Indices follow the algebra's basis order with the unit removed.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from ..algebra import AlgebraId, build_table, get_algebra
from ..errors import BudgetExceeded


class AugmentationIdeal:
    """Product structure of ``ker(eps)`` in its split basis.

    For ideal basis elements ``u_s = b_i - eps_i`` and ``u_t = b_j - eps_j``:

        u_s u_t = delta^e [b_i b_j] - eps_j u_s - eps_i u_t,

    where ``[b]`` is the ideal coordinate of ``b`` (zero for the unit).
    """

    def __init__(self, aid: AlgebraId, table_budget: int | None = None):
        self.aid = aid
        A = get_algebra(aid)
        self.algebra = A
        N = len(A.basis)
        self.dim = N - 1
        self.members = np.array([i for i in range(N) if i != A.unit], dtype=np.int64)
        self.position = np.full(N, -1, dtype=np.int64)
        self.position[self.members] = np.arange(self.dim)
        self.eps = A.full[self.members].astype(np.int64)
        self._K = None
        self._E = None
        self._table_budget = table_budget

    def _ensure_products(self):
        if self._K is None:
            A = self.algebra
            if A.table is None:
                kw = {} if self._table_budget is None else {"budget": self._table_budget}
                try:
                    build_table(self.aid, **kw)
                except BudgetExceeded:
                    raise
            t = A.table
            sub = np.ix_(self.members, self.members)
            self._K = self.position[t.product[sub]]
            self._E = t.loops[sub].astype(np.int64)

    @property
    def K(self) -> np.ndarray:
        """``K[s, t]`` = ideal coordinate of the product diagram (-1 for the unit)."""
        self._ensure_products()
        return self._K

    @property
    def E(self) -> np.ndarray:
        self._ensure_products()
        return self._E

    def product_terms(self, s: int, t: int, ring) -> dict:
        """``u_s u_t`` expanded in the ideal basis over ``ring``."""
        self._ensure_products()
        out: dict = {}
        k = int(self._K[s, t])
        if k >= 0:
            c = ring.delta_power(int(self._E[s, t]))
            if c:
                out[k] = c
        if self.eps[t]:
            out[s] = ring.sub(out.get(s, ring.zero), ring.one)
        if self.eps[s]:
            out[t] = ring.sub(out.get(t, ring.zero), ring.one)
        return {i: v for i, v in out.items() if v}

    def label(self, s: int) -> str:
        i = int(self.members[s])
        txt = self.algebra.serialize(i)
        return f"{txt}-1" if self.eps[s] else txt


@lru_cache(maxsize=None)
def augmentation_ideal(aid: AlgebraId) -> AugmentationIdeal:
    return AugmentationIdeal(aid)
