"""Smith normal form of sparse integer matrices.

The engine keeps the matrix both row- and column-indexed and eliminates
with a Markowitz-style pivot choice: sparsest remaining row, a unit entry if
the row has one, otherwise the entry of least absolute value. Non-unit
pivots are repaired with 2x2 unimodular (xgcd) operations. Transforms are
only tracked on request because they dominate memory on large inputs.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from math import gcd

from .intla import iaxpy, xgcd
from .sparse import SparseMatrix


def _lin(u: dict, v: dict, a: int, b: int) -> dict:
    out = {i: a * x for i, x in u.items()} if a else {}
    if b:
        iaxpy(out, b, v)
    return {i: x for i, x in out.items() if x}


class _Side:
    """One direction of elimination: rows (left ops) or columns (right ops).

    ``major`` holds the lines being combined, ``minor`` the transposed view
    that must stay in sync. ``t`` accumulates the transform as lines of the
    same orientation; ``tinv`` holds its inverse in the transposed
    orientation, so an operation ``E`` on lines is mirrored by ``E^{-1}``
    acting on the other side of ``tinv``.
    """

    __slots__ = ("major", "minor", "t", "tinv")

    def __init__(self, major, minor, size, track):
        self.major = major
        self.minor = minor
        self.t = {k: {k: 1} for k in range(size)} if track else None
        self.tinv = {k: {k: 1} for k in range(size)} if track else None

    def addmul(self, dst: int, src: int, q: int) -> None:
        # line dst += q * line src
        major, minor = self.major, self.minor
        row = major.setdefault(dst, {})
        for j, v in major.get(src, {}).items():
            w = row.get(j, 0) + q * v
            if w:
                row[j] = w
                minor.setdefault(j, {})[dst] = w
            else:
                row.pop(j, None)
                minor[j].pop(dst, None)
        if self.t is not None:
            iaxpy(self.t[dst], q, self.t[src])
            iaxpy(self.tinv[src], -q, self.tinv[dst])

    def combine(self, c1: int, c2: int, a: int, b: int, c: int, d: int) -> None:
        # (line c1, line c2) <- (a c1 + b c2, c c1 + d c2) with ad - bc = 1
        major, minor = self.major, self.minor
        l1, l2 = major.get(c1, {}), major.get(c2, {})
        n1, n2 = _lin(l1, l2, a, b), _lin(l1, l2, c, d)
        for j in set(l1) | set(l2):
            m = minor.setdefault(j, {})
            if j in n1:
                m[c1] = n1[j]
            else:
                m.pop(c1, None)
            if j in n2:
                m[c2] = n2[j]
            else:
                m.pop(c2, None)
        major[c1], major[c2] = n1, n2
        if self.t is not None:
            t1, t2 = self.t[c1], self.t[c2]
            self.t[c1], self.t[c2] = _lin(t1, t2, a, b), _lin(t1, t2, c, d)
            s1, s2 = self.tinv[c1], self.tinv[c2]
            self.tinv[c1], self.tinv[c2] = _lin(s1, s2, d, -c), _lin(s1, s2, -b, a)

    def negate(self, k: int) -> None:
        major, minor = self.major, self.minor
        for j in major.get(k, {}):
            major[k][j] = -major[k][j]
            minor[j][k] = major[k][j]
        if self.t is not None:
            self.t[k] = {i: -v for i, v in self.t[k].items()}
            self.tinv[k] = {i: -v for i, v in self.tinv[k].items()}


@dataclass
class SmithForm:
    """Result of :func:`smith_normal_form`.

    ``diagonal`` lists the nonzero invariant factors ``d_1 | d_2 | ...``
    (units included, as 1). When transforms were requested,
    ``left @ m @ right`` is the diagonal matrix and the inverses are exact.
    Unpacks as ``(diagonal, left, right)``.
    """

    diagonal: list[int]
    shape: tuple[int, int]
    left: SparseMatrix | None = None
    right: SparseMatrix | None = None
    left_inverse: SparseMatrix | None = None
    right_inverse: SparseMatrix | None = None

    def __iter__(self):
        return iter((self.diagonal, self.left, self.right))

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diagonal if d != 1]

    def diagonal_matrix(self) -> SparseMatrix:
        r, c = self.shape
        cols = [{} for _ in range(c)]
        for k, d in enumerate(self.diagonal):
            cols[k][k] = d
        return SparseMatrix._trusted(r, c, cols)


def _eliminate(m: SparseMatrix, track: bool):
    nrows, ncols = m.shape
    rows: dict[int, dict] = {}
    cols: dict[int, dict] = {}
    for j, c in enumerate(m.columns()):
        if c:
            cc = {i: int(v) for i, v in c.items() if v}
            cols[j] = cc
            for i, v in cc.items():
                rows.setdefault(i, {})[j] = v
    R = _Side(rows, cols, nrows, track)
    C = _Side(cols, rows, ncols, track)

    heap = [(len(r), i) for i, r in rows.items()]
    heapq.heapify(heap)
    done_rows: set[int] = set()
    pivots: list[list[int]] = []  # [row, col, value]

    while heap:
        cnt, i = heapq.heappop(heap)
        row = rows.get(i)
        if i in done_rows or not row:
            continue
        if cnt != len(row):
            heapq.heappush(heap, (len(row), i))
            continue
        units = [j for j, v in row.items() if v in (1, -1)]
        if units:
            j = min(units, key=lambda c: (len(cols[c]), c))
        else:
            j = min(row, key=lambda c: (abs(row[c]), len(cols[c]), c))
        while True:
            p = rows[i][j]
            restart = False
            for k in [k for k in cols[j] if k != i]:
                b = cols[j].get(k, 0)
                if not b:
                    continue
                if b % p == 0:
                    R.addmul(k, i, -(b // p))
                    heapq.heappush(heap, (len(rows[k]), k))
                else:
                    x, y, g = xgcd(p, b)
                    R.combine(i, k, x, y, -b // g, p // g)
                    heapq.heappush(heap, (len(rows[k]), k))
                    restart = True
                    break
            if restart:
                continue
            for l in [l for l in rows[i] if l != j]:
                b = rows[i].get(l, 0)
                if not b:
                    continue
                if b % p == 0:
                    C.addmul(l, j, -(b // p))
                else:
                    x, y, g = xgcd(p, b)
                    C.combine(j, l, x, y, -b // g, p // g)
                    restart = True
                    break
            if not restart:
                break
        p = rows[i][j]
        if p < 0:
            R.negate(i)
            p = -p
        done_rows.add(i)
        pivots.append([i, j, p])

    # bring the nonunit part of the diagonal into a divisibility chain
    unit = [k for k, pv in enumerate(pivots) if pv[2] == 1]
    nonunit = [k for k, pv in enumerate(pivots) if pv[2] != 1]
    nonunit.sort(key=lambda k: pivots[k][2])
    for a_pos, ka in enumerate(nonunit):
        for kb in nonunit[a_pos + 1:]:
            a, b = pivots[ka][2], pivots[kb][2]
            if b % a == 0:
                continue
            x, y, g = xgcd(a, b)
            if track:
                ik, jk = pivots[ka][0], pivots[ka][1]
                il, jl = pivots[kb][0], pivots[kb][1]
                R.addmul(ik, il, 1)
                C.combine(jk, jl, x, y, -b // g, a // g)
                R.addmul(il, ik, -(y * b // g))
            pivots[ka][2], pivots[kb][2] = g, a * b // g
    order = unit + nonunit
    return pivots, order, R, C


def smith_normal_form(m: SparseMatrix, transforms: bool = True) -> SmithForm:
    """Smith normal form ``left @ m @ right = diag(d_1, ..., d_r, 0, ...)``.

    With ``transforms=False`` only the invariant factors are computed, which
    is much cheaper for large boundary matrices.
    """
    nrows, ncols = m.shape
    pivots, order, R, C = _eliminate(m, transforms)
    diag = [pivots[k][2] for k in order]
    if not transforms:
        return SmithForm(diag, (nrows, ncols))
    prow = [pivots[k][0] for k in order]
    pcol = [pivots[k][1] for k in order]
    used_r, used_c = set(prow), set(pcol)
    row_order = prow + [i for i in range(nrows) if i not in used_r]
    col_order = pcol + [j for j in range(ncols) if j not in used_c]
    # left: row n of the result is transform row row_order[n]
    left = SparseMatrix._trusted(nrows, nrows, [dict(R.t[k]) for k in row_order]).transpose()
    right = SparseMatrix._trusted(ncols, ncols, [dict(C.t[k]) for k in col_order])
    # left_inverse: column n is tinv column row_order[n]
    left_inv = SparseMatrix._trusted(nrows, nrows, [dict(R.tinv[k]) for k in row_order])
    right_inv = SparseMatrix._trusted(ncols, ncols, [dict(C.tinv[k]) for k in col_order]).transpose()
    return SmithForm(diag, (nrows, ncols), left, right, left_inv, right_inv)


def invariant_factors(m: SparseMatrix) -> list[int]:
    """Nonzero invariant factors of ``m`` (units included) without transforms."""
    return smith_normal_form(m, transforms=False).diagonal


def integer_rank(m: SparseMatrix) -> int:
    return len(invariant_factors(m))


def determinant(m: SparseMatrix) -> int:
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_dense()
    a = [[int(x) for x in row] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] if n else 1


def chain_lcm(values: list[int]) -> list[int]:
    """Normalize a list of positive integers into a divisibility chain."""
    vals = sorted(v for v in values)
    for a in range(len(vals)):
        for b in range(a + 1, len(vals)):
            if vals[b] % vals[a]:
                g = gcd(vals[a], vals[b])
                vals[a], vals[b] = g, vals[a] * vals[b] // g
    return vals
