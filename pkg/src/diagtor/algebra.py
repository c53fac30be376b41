"""Diagram algebras and their quotient group algebras as computational objects.

An :class:`Algebra` owns a canonical basis and answers basis products as
``(k, e)``: the index of the underlying product diagram and its loop
exponent. Elements carry coefficients in whatever :class:`CoefficientRing` is
passed to the arithmetic functions, so a single table serves every ``delta``.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import struct
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import _kernels
from .diagrams import Family, SetPartition, compose_rgs, enumerate_basis
from .errors import BudgetExceeded, CacheError, DiagtorError, DimensionError
from .exactla.rings import CoefficientRing

CACHE_ENV = "DIAGTOR_CACHE_DIR"
TABLE_FORMAT_VERSION = 1
DEFAULT_TABLE_BUDGET = 25_000_000
_MAGIC = b"DTAB"


class AlgebraFamily(str, Enum):
    PARTITION = "partition"
    BRAUER = "brauer"
    TEMPERLEY_LIEB = "temperley-lieb"
    JONES_ANNULAR = "jones"
    SYMMETRIC_GROUP = "symmetric"
    CYCLIC_GROUP = "cyclic"

    @classmethod
    def parse(cls, name: str) -> AlgebraFamily:
        key = name.strip().lower().replace("_", "-")
        groups = {
            "symmetric": cls.SYMMETRIC_GROUP,
            "sym": cls.SYMMETRIC_GROUP,
            "symmetric-group": cls.SYMMETRIC_GROUP,
            "cyclic": cls.CYCLIC_GROUP,
            "cyc": cls.CYCLIC_GROUP,
            "cyclic-group": cls.CYCLIC_GROUP,
        }
        if key in groups:
            return groups[key]
        return cls(Family.parse(name).value)

    @property
    def is_group(self) -> bool:
        return self in (AlgebraFamily.SYMMETRIC_GROUP, AlgebraFamily.CYCLIC_GROUP)

    @property
    def diagram_family(self) -> Family | None:
        return None if self.is_group else Family(self.value)


@dataclass(frozen=True)
class AlgebraId:
    family: AlgebraFamily
    n: int

    def __post_init__(self):
        if not isinstance(self.family, AlgebraFamily):
            object.__setattr__(self, "family", AlgebraFamily.parse(str(self.family)))
        if self.n < 1:
            raise DimensionError("n must be at least 1")

    def __str__(self) -> str:
        return f"{self.family.value}({self.n})"

    @property
    def quotient(self) -> AlgebraId | None:
        """The group algebra that ``A / I_{<=n-1}`` is identified with."""
        f = self.family
        if f in (AlgebraFamily.PARTITION, AlgebraFamily.BRAUER):
            return AlgebraId(AlgebraFamily.SYMMETRIC_GROUP, self.n)
        if f is AlgebraFamily.JONES_ANNULAR:
            return AlgebraId(AlgebraFamily.CYCLIC_GROUP, self.n)
        return None


def algebra_id(family, n: int) -> AlgebraId:
    fam = family if isinstance(family, AlgebraFamily) else AlgebraFamily.parse(str(family))
    return AlgebraId(fam, n)


@dataclass
class MultiplicationTable:
    """``product[i, j] = k`` and ``loops[i, j] = e`` with ``b_i b_j = delta^e b_k``."""

    algebra: AlgebraId
    product: np.ndarray
    loops: np.ndarray
    digest: str = ""

    @property
    def size(self) -> int:
        return self.product.shape[0]

    def entry(self, i: int, j: int) -> tuple[int, int]:
        return int(self.product[i, j]), int(self.loops[i, j])


class Algebra:
    """Canonical basis plus product oracle for one :class:`AlgebraId`."""

    def __init__(self, aid: AlgebraId):
        self.id = aid
        self.n = n = aid.n
        fam = aid.family
        if fam is AlgebraFamily.SYMMETRIC_GROUP:
            self.basis = list(itertools.permutations(range(n)))
            self.full = np.ones(len(self.basis), dtype=bool)
        elif fam is AlgebraFamily.CYCLIC_GROUP:
            self.basis = list(range(n))
            self.full = np.ones(n, dtype=bool)
        else:
            self.basis = enumerate_basis(fam.diagram_family, n)
            self.full = np.array([d.propagating_number() == n for d in self.basis], dtype=bool)
        self.index = {self._key(b): i for i, b in enumerate(self.basis)}
        self.unit = self.index[self._key(self._identity())]
        self._table: MultiplicationTable | None = None
        self._rgs_array = None
        self._sorted_keys = None
        self._digest = None

    # -- basis bookkeeping -------------------------------------------------------

    @property
    def is_group(self) -> bool:
        return self.id.family.is_group

    def __len__(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _identity(self):
        if self.id.family is AlgebraFamily.SYMMETRIC_GROUP:
            return tuple(range(self.n))
        if self.id.family is AlgebraFamily.CYCLIC_GROUP:
            return 0
        return SetPartition.identity(self.n)

    @staticmethod
    def _key(b):
        return b.rgs if isinstance(b, SetPartition) else b

    def index_of(self, b) -> int:
        try:
            return self.index[self._key(b)]
        except KeyError:
            raise DiagtorError(f"{b} is not a basis element of {self.id}") from None

    def serialize(self, i: int) -> str:
        b = self.basis[i]
        if isinstance(b, SetPartition):
            return str(b)
        if isinstance(b, tuple):
            return "(" + ",".join(str(x + 1) for x in b) + ")"
        return f"r{b}"

    @property
    def digest(self) -> str:
        if self._digest is None:
            text = "\n".join(self.serialize(i) for i in range(len(self.basis)))
            self._digest = hashlib.sha256(text.encode()).hexdigest()
        return self._digest

    @property
    def full_indices(self) -> list[int]:
        return [i for i in range(len(self.basis)) if self.full[i]]

    def propagating_number(self, i: int) -> int:
        if self.is_group:
            return self.n
        return self.basis[i].propagating_number()

    # -- products ---------------------------------------------------------------

    def _kernel_ok(self) -> bool:
        return not self.is_group and self.n <= _kernels.MAX_KERNEL_N

    def _prepare_kernel(self):
        if self._rgs_array is None:
            self._rgs_array = np.array([d.rgs for d in self.basis], dtype=np.int8)
            keys = np.array([_kernels.encode(d.rgs, self.n) for d in self.basis], dtype=np.uint64)
            order = np.argsort(keys)
            self._sorted_keys = (keys[order], order.astype(np.int64))

    def _keys_to_index(self, keys: np.ndarray) -> np.ndarray:
        skeys, order = self._sorted_keys
        pos = np.searchsorted(skeys, keys)
        pos = np.minimum(pos, len(skeys) - 1)
        if not np.array_equal(skeys[pos], keys):
            raise DiagtorError(f"a product left the basis of {self.id}")
        return order[pos]

    def product(self, i: int, j: int) -> tuple[int, int]:
        """``(k, e)`` with ``b_i b_j = delta^e b_k``."""
        if self._table is not None:
            return self._table.entry(i, j)
        fam = self.id.family
        if fam is AlgebraFamily.CYCLIC_GROUP:
            return (i + j) % self.n, 0
        if fam is AlgebraFamily.SYMMETRIC_GROUP:
            g, h = self.basis[i], self.basis[j]
            return self.index[tuple(h[g[x]] for x in range(self.n))], 0
        rgs, e = compose_rgs(self.n, self.basis[i].rgs, self.basis[j].rgs)
        k = self.index.get(rgs)
        if k is None:
            raise DiagtorError(f"a product left the basis of {self.id}")
        return k, e

    def products_block(self, left: list[int] | np.ndarray, right: list[int] | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """All products ``b_i b_j`` for ``i`` in ``left`` and ``j`` in ``right``."""
        left = np.asarray(left, dtype=np.int64)
        right = np.asarray(right, dtype=np.int64)
        if self._table is not None:
            t = self._table
            return t.product[np.ix_(left, right)].astype(np.int64), t.loops[np.ix_(left, right)].astype(np.int64)
        if self._kernel_ok():
            self._prepare_kernel()
            arr = self._rgs_array
            keys = np.empty((len(left), len(right)), dtype=np.uint64)
            loops = np.empty((len(left), len(right)), dtype=np.int64)
            if len(left) and len(right):
                _kernels.compose_all(self.n, arr[left], arr[right], keys, loops)
            idx = self._keys_to_index(keys.ravel()).reshape(keys.shape) if keys.size else keys.astype(np.int64)
            return idx, loops
        prod = np.empty((len(left), len(right)), dtype=np.int64)
        loops = np.zeros((len(left), len(right)), dtype=np.int64)
        for a, i in enumerate(left):
            for b, j in enumerate(right):
                prod[a, b], loops[a, b] = self.product(int(i), int(j))
        return prod, loops

    @property
    def table(self) -> MultiplicationTable | None:
        return self._table

    def attach_table(self, table: MultiplicationTable) -> None:
        if table.algebra != self.id or table.size != len(self.basis):
            raise CacheError("table does not match this algebra")
        self._table = table


@lru_cache(maxsize=None)
def get_algebra(aid: AlgebraId) -> Algebra:
    return Algebra(aid)


def _as_algebra(a) -> Algebra:
    if isinstance(a, Algebra):
        return a
    if isinstance(a, AlgebraId):
        return get_algebra(a)
    raise TypeError(f"expected an algebra, got {a!r}")


# -- elements --------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraElement:
    """Finitely supported combination ``sum coeffs[i] * b_i``."""

    algebra: AlgebraId
    coeffs: Mapping[int, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", {int(i): v for i, v in self.coeffs.items() if v})

    @classmethod
    def basis_element(cls, algebra, i: int, coeff=1) -> AlgebraElement:
        aid = algebra.id if isinstance(algebra, Algebra) else algebra
        return cls(aid, {i: coeff})

    @classmethod
    def from_diagram(cls, algebra, d, coeff=1) -> AlgebraElement:
        A = _as_algebra(algebra)
        return cls(A.id, {A.index_of(d): coeff})

    @classmethod
    def unit(cls, algebra) -> AlgebraElement:
        A = _as_algebra(algebra)
        return cls(A.id, {A.unit: 1})

    @classmethod
    def zero(cls, algebra) -> AlgebraElement:
        aid = algebra.id if isinstance(algebra, Algebra) else algebra
        return cls(aid, {})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def add(self, other: AlgebraElement, ring: CoefficientRing) -> AlgebraElement:
        _same(self, other)
        out = dict(self.coeffs)
        for i, v in other.coeffs.items():
            out[i] = ring.add(out.get(i, ring.zero), v)
        return AlgebraElement(self.algebra, out)

    def scale(self, c, ring: CoefficientRing) -> AlgebraElement:
        c = ring.reduce(c)
        return AlgebraElement(self.algebra, {i: ring.mul(c, v) for i, v in self.coeffs.items()})

    def sub(self, other: AlgebraElement, ring: CoefficientRing) -> AlgebraElement:
        return self.add(other.scale(-1, ring), ring)

    def reduce(self, ring: CoefficientRing) -> AlgebraElement:
        return AlgebraElement(self.algebra, {i: ring.reduce(v) for i, v in self.coeffs.items()})

    def equals(self, other: AlgebraElement, ring: CoefficientRing) -> bool:
        return self.algebra == other.algebra and self.sub(other, ring).is_zero

    def to_text(self) -> list[dict]:
        A = get_algebra(self.algebra)
        return [{"diagram": A.serialize(i), "coeff": str(v)} for i, v in sorted(self.coeffs.items())]

    def __str__(self) -> str:
        A = get_algebra(self.algebra)
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*{A.serialize(i)}" for i, v in sorted(self.coeffs.items()))


def _same(x: AlgebraElement, y: AlgebraElement) -> None:
    if x.algebra != y.algebra:
        raise DimensionError(f"elements of {x.algebra} and {y.algebra} cannot be combined")


def multiply(x: AlgebraElement, y: AlgebraElement, ring: CoefficientRing) -> AlgebraElement:
    """Bilinear product; each basis product contributes ``delta^e``."""
    _same(x, y)
    A = get_algebra(x.algebra)
    out: dict = {}
    for i, a in x.coeffs.items():
        for j, b in y.coeffs.items():
            k, e = A.product(i, j)
            c = ring.mul(ring.mul(a, b), ring.delta_power(e))
            if c:
                out[k] = ring.add(out.get(k, ring.zero), c)
    return AlgebraElement(x.algebra, out)


def augmentation(x: AlgebraElement, ring: CoefficientRing):
    """Coefficient sum over full-propagation diagrams (all of them for a group algebra)."""
    A = get_algebra(x.algebra)
    s = ring.zero
    for i, v in x.coeffs.items():
        if A.full[i]:
            s = ring.add(s, ring.reduce(v))
    return s


@lru_cache(maxsize=None)
def quotient_indices(aid: AlgebraId) -> tuple[int | None, ...]:
    """Image of each basis diagram in the quotient group algebra (None when it maps to 0)."""
    target = aid.quotient
    if target is None:
        raise DiagtorError(f"{aid} has no group-algebra quotient")
    A, G = get_algebra(aid), get_algebra(target)
    out: list[int | None] = []
    for i, d in enumerate(A.basis):
        if not A.full[i]:
            out.append(None)
            continue
        perm = d.permutation()
        if target.family is AlgebraFamily.SYMMETRIC_GROUP:
            out.append(G.index[perm])
        else:
            k = perm[0]
            if any(perm[j] != (j + k) % aid.n for j in range(aid.n)):
                raise DiagtorError(f"{d} has full propagation but is not a rotation")
            out.append(k)
    return tuple(out)


def quotient_map(x: AlgebraElement, ring: CoefficientRing) -> AlgebraElement:
    """Image under ``A -> A / I_{<=n-1}``, identified with ``R Sigma_n`` or ``R C_n``."""
    q = quotient_indices(x.algebra)
    out: dict = {}
    for i, v in x.coeffs.items():
        k = q[i]
        if k is not None:
            out[k] = ring.add(out.get(k, ring.zero), ring.reduce(v))
    return AlgebraElement(x.algebra.quotient, out)


# -- tables ------------------------------------------------------------------------


def default_cache_dir() -> Path | None:
    d = os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def build_table(aid: AlgebraId, budget: int | None = DEFAULT_TABLE_BUDGET, cache_dir=None, attach: bool = True) -> MultiplicationTable:
    """Full multiplication table, loaded from or saved to ``cache_dir`` when given."""
    A = get_algebra(aid)
    if A.table is not None:
        return A.table
    N = len(A.basis)
    if budget is not None and N * N > budget:
        raise BudgetExceeded(f"multiplication table of {aid}", N * N, budget)
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    table = None
    if cache is not None:
        try:
            table = load_table(aid, cache)
        except (CacheError, FileNotFoundError):
            table = None
    if table is None:
        table = _compute_table(A)
        if cache is not None:
            save_table(table, cache)
    if attach:
        A.attach_table(table)
    return table


def _compute_table(A: Algebra) -> MultiplicationTable:
    N = len(A.basis)
    fam = A.id.family
    if fam is AlgebraFamily.CYCLIC_GROUP:
        r = np.arange(N)
        prod = (r[:, None] + r[None, :]) % N
        return MultiplicationTable(A.id, prod.astype(np.int32), np.zeros((N, N), np.uint8), A.digest)
    prod = np.empty((N, N), dtype=np.int32)
    loops = np.zeros((N, N), dtype=np.uint8)
    everything = np.arange(N)
    block = max(1, 2_000_000 // max(N, 1))
    for start in range(0, N, block):
        rows = everything[start:start + block]
        p, e = A.products_block(rows, everything)
        prod[start:start + len(rows)] = p
        loops[start:start + len(rows)] = e
    return MultiplicationTable(A.id, prod, loops, A.digest)


def _table_paths(aid: AlgebraId, cache: Path) -> tuple[Path, Path]:
    stem = f"{aid.family.value}-{aid.n}"
    return cache / f"{stem}.dtab", cache / f"{stem}.json"


def save_table(table: MultiplicationTable, cache_dir) -> Path:
    cache = Path(cache_dir)
    cache.mkdir(parents=True, exist_ok=True)
    path, side = _table_paths(table.algebra, cache)
    A = get_algebra(table.algebra)
    N = table.size
    fam = table.algebra.family.value.encode()
    header = _MAGIC + struct.pack("<II", TABLE_FORMAT_VERSION, len(fam)) + fam
    header += struct.pack("<II", table.algebra.n, N) + bytes.fromhex(A.digest)
    ii, jj = np.meshgrid(np.arange(N, dtype=np.uint32), np.arange(N, dtype=np.uint32), indexing="ij")
    body = np.stack([ii.ravel(), jj.ravel(), table.product.astype("<u4").ravel(), table.loops.astype("<u4").ravel()], axis=1)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "wb") as fh:
        fh.write(header)
        fh.write(body.astype("<u4").tobytes())
    os.replace(tmp, path)
    side.write_text(
        json.dumps(
            {
                "format_version": TABLE_FORMAT_VERSION,
                "family": table.algebra.family.value,
                "n": table.algebra.n,
                "basis_count": N,
                "digest": A.digest,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n"
    )
    return path


def load_table(aid: AlgebraId, cache_dir) -> MultiplicationTable:
    """Read a cached table; any inconsistency raises :class:`CacheError`."""
    path, side = _table_paths(aid, Path(cache_dir))
    A = get_algebra(aid)
    meta = json.loads(side.read_text())
    if meta.get("digest") != A.digest or meta.get("format_version") != TABLE_FORMAT_VERSION:
        raise CacheError(f"sidecar for {aid} does not match the current basis")
    data = path.read_bytes()
    if data[:4] != _MAGIC:
        raise CacheError("bad magic")
    pos = 4
    version, flen = struct.unpack_from("<II", data, pos)
    pos += 8
    fam = data[pos:pos + flen].decode()
    pos += flen
    n, N = struct.unpack_from("<II", data, pos)
    pos += 8
    digest = data[pos:pos + 32].hex()
    pos += 32
    if version != TABLE_FORMAT_VERSION or fam != aid.family.value or n != aid.n or N != len(A.basis) or digest != A.digest:
        raise CacheError(f"cached table header does not match {aid}")
    body = np.frombuffer(data, dtype="<u4", offset=pos)
    if body.size != 4 * N * N:
        raise CacheError("truncated table body")
    body = body.reshape(N * N, 4)
    ii = np.repeat(np.arange(N, dtype=np.uint32), N)
    jj = np.tile(np.arange(N, dtype=np.uint32), N)
    if not (np.array_equal(body[:, 0], ii) and np.array_equal(body[:, 1], jj)):
        raise CacheError("table entries out of order")
    prod = body[:, 2].astype(np.int32).reshape(N, N)
    loops = body[:, 3].astype(np.uint8).reshape(N, N)
    if prod.size and (prod.max() >= N or prod.min() < 0):
        raise CacheError("product index out of range")
    return MultiplicationTable(aid, prod, loops, digest)
