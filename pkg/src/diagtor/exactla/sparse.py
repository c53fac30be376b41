"""Column-major sparse matrices with exact entries.

Columns are dicts ``row -> value`` holding nonzero entries only. A matrix is
treated as immutable once constructed; the dicts returned by :meth:`column`
must not be modified by callers.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from typing import Any

from ..errors import DimensionError


class SparseMatrix:
    __slots__ = ("nrows", "ncols", "_cols")

    def __init__(self, nrows: int, ncols: int, columns: Iterable[Mapping[int, Any]] | None = None):
        if nrows < 0 or ncols < 0:
            raise DimensionError("negative matrix shape")
        self.nrows = nrows
        self.ncols = ncols
        if columns is None:
            cols = [{} for _ in range(ncols)]
        else:
            cols = []
            for c in columns:
                col = {}
                for i, v in c.items():
                    if v:
                        if not 0 <= i < nrows:
                            raise DimensionError(f"row index {i} out of range for {nrows} rows")
                        col[i] = v
                cols.append(col)
            if len(cols) != ncols:
                raise DimensionError(f"expected {ncols} columns, got {len(cols)}")
        self._cols = cols

    @classmethod
    def _trusted(cls, nrows: int, ncols: int, cols: list[dict]) -> SparseMatrix:
        # columns already validated and free of zeros
        m = cls.__new__(cls)
        m.nrows, m.ncols, m._cols = nrows, ncols, cols
        return m

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> SparseMatrix:
        return cls._trusted(nrows, ncols, [{} for _ in range(ncols)])

    @classmethod
    def identity(cls, n: int) -> SparseMatrix:
        return cls._trusted(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, rows: list[list[Any]], ncols: int | None = None) -> SparseMatrix:
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        cols: list[dict] = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise DimensionError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = v
        return cls._trusted(nrows, ncols, cols)

    @classmethod
    def from_triplets(cls, nrows: int, ncols: int, triplets: Iterable[tuple[int, int, Any]], ring=None) -> SparseMatrix:
        """Build from ``(row, col, value)``; duplicate positions are summed."""
        cols: list[dict] = [{} for _ in range(ncols)]
        for i, j, v in triplets:
            if not (0 <= i < nrows and 0 <= j < ncols):
                raise DimensionError(f"entry ({i}, {j}) out of range")
            c = cols[j]
            c[i] = c.get(i, 0) + v
        for c in cols:
            for i in [i for i, v in c.items() if (ring.reduce(v) if ring else v) == 0]:
                del c[i]
            if ring is not None:
                for i in c:
                    c[i] = ring.reduce(c[i])
        return cls._trusted(nrows, ncols, cols)

    @classmethod
    def from_columns(cls, nrows: int, columns: list[Mapping[int, Any]]) -> SparseMatrix:
        return cls(nrows, len(columns), columns)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols)

    def column(self, j: int) -> dict:
        return self._cols[j]

    def columns(self) -> list[dict]:
        return self._cols

    def entries(self) -> Iterator[tuple[int, int, Any]]:
        for j, c in enumerate(self._cols):
            for i in sorted(c):
                yield i, j, c[i]

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self._cols[j].get(i, 0)

    def to_dense(self) -> list[list[Any]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def rows(self) -> list[dict]:
        """Row-major view: list of dicts ``col -> value``."""
        out: list[dict] = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self._cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not any(self._cols)

    # -- algebra ------------------------------------------------------------

    def transpose(self) -> SparseMatrix:
        return SparseMatrix._trusted(self.ncols, self.nrows, self.rows())

    @property
    def T(self) -> SparseMatrix:
        return self.transpose()

    def reduce(self, ring) -> SparseMatrix:
        """Entries mapped into ``ring``; zeros dropped."""
        cols = []
        red = ring.reduce
        for c in self._cols:
            nc = {}
            for i, v in c.items():
                w = red(v)
                if w:
                    nc[i] = w
            cols.append(nc)
        return SparseMatrix._trusted(self.nrows, self.ncols, cols)

    def apply(self, vec: Mapping[int, Any], ring=None) -> dict:
        """Matrix times a sparse column vector."""
        out: dict = {}
        cols = self._cols
        for j, x in vec.items():
            for i, v in cols[j].items():
                out[i] = out.get(i, 0) + v * x
        return _clean(out, ring)

    def matmul(self, other: SparseMatrix, ring=None) -> SparseMatrix:
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [self.apply(c, ring) for c in other._cols]
        return SparseMatrix._trusted(self.nrows, other.ncols, cols)

    def __matmul__(self, other: SparseMatrix) -> SparseMatrix:
        return self.matmul(other)

    def __add__(self, other: SparseMatrix) -> SparseMatrix:
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        cols = []
        for a, b in zip(self._cols, other._cols):
            c = dict(a)
            for i, v in b.items():
                c[i] = c.get(i, 0) + v
            cols.append(_clean(c, None))
        return SparseMatrix._trusted(self.nrows, self.ncols, cols)

    def __neg__(self) -> SparseMatrix:
        return SparseMatrix._trusted(self.nrows, self.ncols, [{i: -v for i, v in c.items()} for c in self._cols])

    def __sub__(self, other: SparseMatrix) -> SparseMatrix:
        return self + (-other)

    def scale(self, s, ring=None) -> SparseMatrix:
        return SparseMatrix._trusted(
            self.nrows, self.ncols, [_clean({i: v * s for i, v in c.items()}, ring) for c in self._cols]
        )

    def select_columns(self, idx: Iterable[int]) -> SparseMatrix:
        cols = [self._cols[j] for j in idx]
        return SparseMatrix._trusted(self.nrows, len(cols), cols)

    def hstack(self, other: SparseMatrix) -> SparseMatrix:
        if self.nrows != other.nrows:
            raise DimensionError("row mismatch in hstack")
        return SparseMatrix._trusted(self.nrows, self.ncols + other.ncols, self._cols + other._cols)

    def equals(self, other: SparseMatrix, ring=None) -> bool:
        if self.shape != other.shape:
            return False
        if ring is None:
            return self._cols == other._cols
        return (self - other).reduce(ring).is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"

    # -- triplet text format --------------------------------------------------

    def to_triplet_text(self) -> str:
        """``rows cols nnz`` header, then one ``row col value`` line per entry."""
        lines = [f"{self.nrows} {self.ncols} {self.nnz}"]
        lines.extend(f"{i} {j} {v}" for i, j, v in self.entries())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplet_text(cls, text: str, parse=int) -> SparseMatrix:
        it = iter(text.split("\n"))
        r, c, nnz = (int(x) for x in next(it).split())
        trip = []
        for line in it:
            if line.strip():
                i, j, v = line.split()
                trip.append((int(i), int(j), parse(v)))
        if len(trip) != nnz:
            raise ValueError(f"triplet count {len(trip)} does not match header {nnz}")
        return cls.from_triplets(r, c, trip)


def _clean(vec: dict, ring) -> dict:
    if ring is None:
        return {i: v for i, v in vec.items() if v}
    red = ring.reduce
    out = {}
    for i, v in vec.items():
        w = red(v)
        if w:
            out[i] = w
    return out
