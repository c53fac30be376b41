"""Integer lattices: kernels, membership, and exact solving over Z.

Everything here uses Python integers, so no overflow can occur; the only
cost of coefficient growth is time.
"""

from __future__ import annotations

import heapq
from collections.abc import Iterable, Mapping

from .sparse import SparseMatrix


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(x, y, g)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def iaxpy(y: dict, a: int, x: Mapping[int, int]) -> None:
    """In place ``y += a * x`` over Z."""
    for i, v in x.items():
        w = y.get(i, 0) + a * v
        if w:
            y[i] = w
        else:
            y.pop(i, None)


def _combine(u: Mapping, v: Mapping, a: int, b: int) -> dict:
    """``a*u + b*v`` as a fresh dict."""
    out = {i: a * x for i, x in u.items()} if a else {}
    if b:
        iaxpy(out, b, v)
    return {i: x for i, x in out.items() if x}


class IntegerLattice:
    """A sublattice of Z^N kept in echelon form (leading entry = largest index).

    Supports insertion of generators and exact membership tests.
    """

    def __init__(self):
        self.pivots: dict[int, dict] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, vec: Mapping[int, int]) -> bool:
        """Insert a generator; return True if the lattice grew."""
        v = {i: x for i, x in vec.items() if x}
        changed = False
        pivots = self.pivots
        while v:
            r = max(v)
            piv = pivots.get(r)
            if piv is None:
                if v[r] < 0:
                    v = {i: -x for i, x in v.items()}
                pivots[r] = v
                return True
            a, b = piv[r], v[r]
            if b % a == 0:
                iaxpy(v, -(b // a), piv)
                continue
            x, y, g = xgcd(a, b)
            new_piv = _combine(piv, v, x, y)
            v = _combine(piv, v, -b // g, a // g)
            pivots[r] = new_piv
            changed = True
        return changed

    def contains(self, vec: Mapping[int, int]) -> bool:
        v = {i: x for i, x in vec.items() if x}
        pivots = self.pivots
        while v:
            r = max(v)
            piv = pivots.get(r)
            if piv is None:
                return False
            a, b = piv[r], v[r]
            if b % a:
                return False
            iaxpy(v, -(b // a), piv)
        return True

    __contains__ = contains


class ColumnReduction:
    """Unimodular column reduction ``M U = [B | 0]`` of an integer matrix.

    After construction:

    * ``kernel`` is a Z-basis of ``{x : M x = 0}`` (as sparse dicts);
    * ``rank`` is the rank of ``M``;
    * :meth:`solve` finds integer solutions of ``M x = b``;
    * with ``track_inverse`` the rows of ``U^{-1}`` are kept, giving
      :meth:`kernel_coordinates`.

    Rows are processed sparsest first and pivots prefer entries of small
    absolute value, which keeps the ±1-heavy matrices of this package sparse.
    """

    def __init__(self, m: SparseMatrix, track_inverse: bool = False):
        self.nrows, self.ncols = m.shape
        self.track_inverse = track_inverse
        img: dict[int, dict] = {}
        comb: dict[int, dict] = {}
        inv: dict[int, dict] | None = {j: {j: 1} for j in range(self.ncols)} if track_inverse else None
        row_index: dict[int, set] = {}
        for j, c in enumerate(m.columns()):
            cc = {i: int(v) for i, v in c.items() if v}
            img[j] = cc
            comb[j] = {j: 1}
            for i in cc:
                row_index.setdefault(i, set()).add(j)

        heap = [(len(s), i) for i, s in row_index.items()]
        heapq.heapify(heap)
        retired: list[tuple[int, dict, dict, int]] = []

        def col_addmul(dst: int, src: int, q: int) -> None:
            # column dst += q * column src
            for i, v in img[src].items():
                old = img[dst].get(i, 0)
                w = old + q * v
                if w:
                    img[dst][i] = w
                    if not old:
                        row_index.setdefault(i, set()).add(dst)
                else:
                    del img[dst][i]
                    row_index[i].discard(dst)
            iaxpy(comb[dst], q, comb[src])
            if inv is not None:
                iaxpy(inv[src], -q, inv[dst])

        def col_combine(c1: int, c2: int, a: int, b: int, c: int, d: int) -> None:
            # (col c1, col c2) <- (a c1 + b c2, c c1 + d c2), ad - bc = 1
            i1, i2 = img[c1], img[c2]
            n1, n2 = _combine(i1, i2, a, b), _combine(i1, i2, c, d)
            for i in set(i1) | set(i2):
                s = row_index.setdefault(i, set())
                if i in n1:
                    s.add(c1)
                else:
                    s.discard(c1)
                if i in n2:
                    s.add(c2)
                else:
                    s.discard(c2)
            img[c1], img[c2] = n1, n2
            u1, u2 = comb[c1], comb[c2]
            comb[c1], comb[c2] = _combine(u1, u2, a, b), _combine(u1, u2, c, d)
            if inv is not None:
                # inverse of [[a, c], [b, d]] acting on rows (c1, c2)
                r1, r2 = inv[c1], inv[c2]
                inv[c1], inv[c2] = _combine(r1, r2, d, -c), _combine(r1, r2, -b, a)

        active = set(img)
        while True:
            if not heap:
                # rows created by fill-in never entered the heap
                heap = [(len(s), i) for i, s in row_index.items() if s]
                if not heap:
                    break
                heapq.heapify(heap)
            cnt, r = heapq.heappop(heap)
            cols_r = row_index.get(r)
            if not cols_r:
                continue
            if cnt != len(cols_r):
                heapq.heappush(heap, (len(cols_r), r))
                continue
            while True:
                cols_r = row_index[r]
                piv = min(cols_r, key=lambda j: (abs(img[j][r]), len(img[j]), j))
                pa = img[piv][r]
                others = [j for j in cols_r if j != piv]
                if not others:
                    break
                redo = False
                for k in others:
                    b = img[k].get(r, 0)
                    if not b:
                        continue
                    if b % pa == 0:
                        col_addmul(k, piv, -(b // pa))
                    else:
                        x, y, g = xgcd(pa, b)
                        # new piv = x*piv + y*k (entry g); new k = -(b/g)*piv + (a/g)*k (entry 0)
                        col_combine(piv, k, x, y, -b // g, pa // g)
                        redo = True
                        break
                if not redo:
                    break
            # column piv is now alone in row r
            retired.append((r, img[piv], comb[piv], piv))
            for i in img[piv]:
                row_index[i].discard(piv)
                s = row_index[i]
                if s:
                    heapq.heappush(heap, (len(s), i))
            active.discard(piv)
            del row_index[r]

        self._retired = retired
        self.rank = len(retired)
        kernel_cols = sorted(j for j in active if not img[j])
        self.kernel_columns = kernel_cols
        self.kernel = [comb[j] for j in kernel_cols]
        self._inv = inv

    def image_basis(self) -> list[dict]:
        return [r[1] for r in self._retired]

    def solve(self, b: Mapping[int, int]) -> dict | None:
        """Integer ``x`` with ``M x = b`` or None when no integer solution exists."""
        res = {i: int(v) for i, v in b.items() if v}
        x: dict = {}
        for r, im, cb, _ in self._retired:
            t = res.get(r, 0)
            if not t:
                continue
            a = im[r]
            if t % a:
                return None
            q = t // a
            iaxpy(res, -q, im)
            iaxpy(x, q, cb)
        if res:
            return None
        return x

    def kernel_coordinates(self, z: Mapping[int, int]) -> list[int]:
        """Coordinates of a kernel vector ``z`` in :attr:`kernel` (requires ``track_inverse``)."""
        if self._inv is None:
            raise ValueError("kernel_coordinates needs track_inverse=True")
        out = []
        for j in self.kernel_columns:
            row = self._inv[j]
            out.append(sum(v * z.get(i, 0) for i, v in row.items()))
        return out


def kernel_basis(m: SparseMatrix) -> list[dict]:
    """A Z-basis of the integer kernel of ``m``."""
    return ColumnReduction(m).kernel


def solve_integer(m: SparseMatrix, b: Mapping[int, int]) -> dict | None:
    return ColumnReduction(m).solve(b)


def lattice_from(vectors: Iterable[Mapping[int, int]]) -> IntegerLattice:
    lat = IntegerLattice()
    for v in vectors:
        lat.add(v)
    return lat
