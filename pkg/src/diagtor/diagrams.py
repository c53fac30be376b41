"""Set-partition diagrams on {1..n, 1'..n'} and the annular link-state basis.

Vertices are numbered internally 0..2n-1: label ``i`` is ``i - 1`` and label
``i'`` is ``n + i - 1``, so the canonical label order 1 < ... < n < 1' < ...
< n' is plain integer order. A partition is stored as its restricted growth
string (``rgs[v]`` = index of the block of ``v``, blocks numbered by least
element), which makes structural equality the same as tuple equality.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from enum import Enum

from .errors import DimensionError, NotAnnularError, PreconditionError


class Family(str, Enum):
    PARTITION = "partition"
    BRAUER = "brauer"
    TEMPERLEY_LIEB = "temperley-lieb"
    JONES_ANNULAR = "jones"

    @classmethod
    def parse(cls, name: str) -> Family:
        key = name.strip().lower().replace("_", "-")
        aliases = {
            "p": cls.PARTITION,
            "partition": cls.PARTITION,
            "br": cls.BRAUER,
            "brauer": cls.BRAUER,
            "tl": cls.TEMPERLEY_LIEB,
            "temperley-lieb": cls.TEMPERLEY_LIEB,
            "temperleylieb": cls.TEMPERLEY_LIEB,
            "j": cls.JONES_ANNULAR,
            "jones": cls.JONES_ANNULAR,
            "jones-annular": cls.JONES_ANNULAR,
            "jonesannular": cls.JONES_ANNULAR,
            "annular": cls.JONES_ANNULAR,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown diagram family {name!r}") from None


def _normalize(labels: Sequence[int]) -> tuple[int, ...]:
    seen: dict[int, int] = {}
    out = []
    for x in labels:
        if x not in seen:
            seen[x] = len(seen)
        out.append(seen[x])
    return tuple(out)


def vertex_index(label, n: int) -> int:
    """Internal index of a label given as ``3``, ``"3"``, ``"3'"`` or ``(3, True)``."""
    if isinstance(label, tuple):
        i, primed = label
    elif isinstance(label, str):
        s = label.strip()
        primed = s.endswith("'")
        i = int(s.rstrip("'"))
    else:
        i, primed = int(label), False
    if not 1 <= i <= n:
        raise DimensionError(f"label {label!r} out of range for n = {n}")
    return i - 1 + (n if primed else 0)


def vertex_label(v: int, n: int) -> str:
    return f"{v - n + 1}'" if v >= n else str(v + 1)


class SetPartition:
    """A partition of the 2n labels ``1..n, 1'..n'``."""

    __slots__ = ("n", "rgs", "_hash")

    def __init__(self, n: int, rgs: Sequence[int]):
        if len(rgs) != 2 * n:
            raise DimensionError(f"expected {2 * n} labels, got {len(rgs)}")
        self.n = n
        self.rgs = _normalize(rgs)
        self._hash = hash((n, self.rgs))

    # -- construction ----------------------------------------------------------

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable]) -> SetPartition:
        owner = [-1] * (2 * n)
        for b, block in enumerate(blocks):
            for lab in block:
                v = vertex_index(lab, n)
                if owner[v] != -1:
                    raise PreconditionError(f"label {vertex_label(v, n)} appears twice")
                owner[v] = b
        missing = [vertex_label(v, n) for v in range(2 * n) if owner[v] == -1]
        if missing:
            raise PreconditionError(f"labels {missing} are not covered")
        return cls(n, owner)

    @classmethod
    def from_index_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> SetPartition:
        owner = [-1] * (2 * n)
        for b, block in enumerate(blocks):
            for v in block:
                owner[v] = b
        if -1 in owner:
            raise PreconditionError("blocks do not cover every vertex")
        return cls(n, owner)

    @classmethod
    def identity(cls, n: int) -> SetPartition:
        return cls(n, list(range(n)) * 2)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> SetPartition:
        """Inverse of ``str``: ``{1,2}{1',2'}``."""
        blocks = [[x for x in b.split(",") if x.strip()] for b in re.findall(r"\{([^}]*)\}", text)]
        if n is None:
            n = max(int(x.strip().rstrip("'")) for b in blocks for x in b)
        return cls.from_blocks(n, blocks)

    # -- views -----------------------------------------------------------------

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        """Blocks as sorted tuples of internal indices, ordered by least element."""
        out: list[list[int]] = []
        for v, b in enumerate(self.rgs):
            if b == len(out):
                out.append([])
            out[b].append(v)
        return tuple(tuple(b) for b in out)

    def labeled_blocks(self) -> list[list[str]]:
        return [[vertex_label(v, self.n) for v in b] for b in self.blocks]

    def sort_key(self) -> tuple:
        return self.blocks

    def __str__(self) -> str:
        return "".join("{" + ",".join(b) + "}" for b in self.labeled_blocks())

    def __repr__(self) -> str:
        return f"SetPartition({self})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SetPartition):
            return NotImplemented
        return self.n == other.n and self.rgs == other.rgs

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: SetPartition) -> bool:
        return self.sort_key() < other.sort_key()

    # -- invariants ------------------------------------------------------------

    def propagating_number(self) -> int:
        n = self.n
        bottom = set(self.rgs[:n])
        return len(bottom.intersection(self.rgs[n:]))

    def block_sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def is_pairing(self) -> bool:
        return all(len(b) == 2 for b in self.blocks)

    def is_planar(self) -> bool:
        """Non-crossing on the rectangle (endpoints read 1..n, n'..1')."""
        if not self.is_pairing():
            return False
        n = self.n
        pos = [v if v < n else 3 * n - 1 - v for v in range(2 * n)]
        chords = [tuple(sorted((pos[a], pos[b]))) for a, b in self.blocks]
        for (a, b), (c, d) in itertools.combinations(chords, 2):
            if a < c < b < d or c < a < d < b:
                return False
        return True

    def permutation(self) -> tuple[int, ...] | None:
        """For a full-propagation pairing: ``pi`` with bottom ``j`` joined to top ``pi[j]`` (0-based)."""
        n = self.n
        if self.propagating_number() != n or not self.is_pairing():
            return None
        top = {b: v - n for v, b in enumerate(self.rgs) if v >= n}
        return tuple(top[self.rgs[j]] for j in range(n))

    def restriction(self, primed: bool) -> list[tuple[int, ...]]:
        """Blocks intersected with one row, as 1-based labels (empty pieces dropped)."""
        n = self.n
        lo = n if primed else 0
        out = []
        for b in self.blocks:
            part = tuple(v - lo + 1 for v in b if lo <= v < lo + n)
            if part:
                out.append(part)
        return out


def identity(n: int) -> SetPartition:
    return SetPartition.identity(n)


def compose(mu: SetPartition, nu: SetPartition) -> tuple[SetPartition, int]:
    """The composed diagram ``mu * nu`` and its number of middle loops.

    The top row of ``mu`` is glued to the bottom row of ``nu``; the result
    keeps the bottom row of ``mu`` and the top row of ``nu``.
    """
    if mu.n != nu.n:
        raise DimensionError(f"cannot compose diagrams on {mu.n} and {nu.n} strands")
    rgs, loops = compose_rgs(mu.n, mu.rgs, nu.rgs)
    return SetPartition(mu.n, rgs), loops


def compose_rgs(n: int, a: Sequence[int], b: Sequence[int]) -> tuple[tuple[int, ...], int]:
    # vertices: 0..n-1 bottom, n..2n-1 middle, 2n..3n-1 top
    parent = list(range(3 * n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    first: dict[int, int] = {}
    for v in range(2 * n):
        blk = a[v]
        if blk in first:
            ra, rb = find(v), find(first[blk])
            if ra != rb:
                parent[ra] = rb
        else:
            first[blk] = v
    first = {}
    for v in range(2 * n):
        w = v + n
        blk = b[v]
        if blk in first:
            ra, rb = find(w), find(first[blk])
            if ra != rb:
                parent[ra] = rb
        else:
            first[blk] = w
    outer = set()
    labels = []
    for v in itertools.chain(range(n), range(2 * n, 3 * n)):
        r = find(v)
        outer.add(r)
        labels.append(r)
    middle_roots = {find(v) for v in range(n, 2 * n)}
    loops = len(middle_roots - outer)
    return _normalize(labels), loops


def propagating_number(rho: SetPartition) -> int:
    return rho.propagating_number()


# -- enumeration --------------------------------------------------------------


def _set_partitions(m: int):
    """All restricted growth strings of length ``m``."""
    if m == 0:
        yield ()
        return
    rgs = [0] * m

    def rec(i: int, mx: int):
        if i == m:
            yield tuple(rgs)
            return
        for b in range(mx + 2):
            rgs[i] = b
            yield from rec(i + 1, max(mx, b))

    yield from rec(1, 0)


def _perfect_matchings(items: list[int]):
    if not items:
        yield []
        return
    a = items[0]
    for k in range(1, len(items)):
        rest = items[1:k] + items[k + 1:]
        for m in _perfect_matchings(rest):
            yield [(a, items[k])] + m


def enumerate_basis(family: Family | str, n: int) -> list[SetPartition]:
    """Canonically ordered basis diagrams of the named family."""
    if n < 1:
        raise DimensionError("n must be at least 1")
    fam = Family.parse(family) if isinstance(family, str) else family
    if fam is Family.PARTITION:
        out = [SetPartition(n, r) for r in _set_partitions(2 * n)]
    elif fam is Family.BRAUER:
        out = [SetPartition.from_index_blocks(n, m) for m in _perfect_matchings(list(range(2 * n)))]
    elif fam is Family.TEMPERLEY_LIEB:
        out = [d for d in enumerate_basis(Family.BRAUER, n) if d.is_planar()]
    else:
        out = []
        for t in range(n % 2, n + 1, 2):
            states = link_states(n, t)
            for p in states:
                for q in states:
                    for s in range(max(t, 1)):
                        out.append(build_annular(p, q, s))
    out.sort(key=SetPartition.sort_key)
    return out


# -- annular link states ----------------------------------------------------------


def _crosses(a: int, b: int, c: int, d: int) -> bool:
    return a < c < b < d or c < a < d < b


@dataclass(frozen=True)
class AnnularLinkState:
    """Arcs and defects of one row, labels 1..n; defects in increasing order."""

    n: int
    arcs: tuple[tuple[int, int], ...]
    defects: tuple[int, ...]

    def __post_init__(self):
        arcs = tuple(sorted(tuple(sorted(a)) for a in self.arcs))
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "defects", tuple(sorted(self.defects)))

    @property
    def t(self) -> int:
        return len(self.defects)

    def is_valid(self) -> bool:
        seen = [x for a in self.arcs for x in a] + list(self.defects)
        if sorted(seen) != list(range(1, self.n + 1)):
            return False
        for (a, b), (c, d) in itertools.combinations(self.arcs, 2):
            if _crosses(a, b, c, d):
                return False
        for a, b in self.arcs:
            inside = [a < x < b for x in self.defects]
            if any(inside) and not all(inside):
                return False
        return True

    def __str__(self) -> str:
        parts = [f"{{{a},{b}}}" for a, b in self.arcs] + [f"{{{d}}}" for d in self.defects]
        return "".join(parts)


@dataclass(frozen=True)
class AnnularDiagram:
    bottom: AnnularLinkState
    top: AnnularLinkState
    rotation: int

    def to_partition(self) -> SetPartition:
        return build_annular(self.bottom, self.top, self.rotation)


def link_states(n: int, t: int) -> list[AnnularLinkState]:
    """The set M(t) of annular link states on n points with t defects."""
    if t < 0 or t > n or (n - t) % 2:
        return []
    k = (n - t) // 2
    out = []
    for dset in itertools.combinations(range(1, n + 1), t):
        rest = [x for x in range(1, n + 1) if x not in dset]
        for m in _perfect_matchings(rest):
            st = AnnularLinkState(n, tuple(m), dset)
            if st.is_valid():
                out.append(st)
    assert all(len(s.arcs) == k for s in out)
    out.sort(key=lambda s: (s.defects, s.arcs))
    return out


def build_annular(p: AnnularLinkState, q: AnnularLinkState, sigma: int) -> SetPartition:
    """The diagram with bottom row ``p``, top row ``q`` and defect ``i`` of ``q`` joined to defect ``sigma(i)`` of ``p``.

    ``sigma`` is the rotation ``i -> i + sigma (mod t)`` of C_t.
    """
    if p.n != q.n:
        raise DimensionError("link states on different n")
    if p.t != q.t:
        raise PreconditionError(f"defect counts differ: {p.t} vs {q.t}")
    n, t = p.n, p.t
    blocks = [[a - 1, b - 1] for a, b in p.arcs]
    blocks += [[n + a - 1, n + b - 1] for a, b in q.arcs]
    s = sigma % t if t else 0
    for i, d in enumerate(q.defects):
        blocks.append([p.defects[(i + s) % t] - 1, n + d - 1])
    return SetPartition.from_index_blocks(n, blocks)


def decompose_annular(rho: SetPartition) -> AnnularDiagram | None:
    """Inverse of :func:`build_annular`, or None when ``rho`` is not annular."""
    if not rho.is_pairing():
        return None
    n = rho.n
    b_arcs, t_arcs, through = [], [], []
    for a, b in rho.blocks:
        if b < n:
            b_arcs.append((a + 1, b + 1))
        elif a >= n:
            t_arcs.append((a - n + 1, b - n + 1))
        else:
            through.append((a + 1, b - n + 1))
    p = AnnularLinkState(n, tuple(b_arcs), tuple(x for x, _ in through))
    q = AnnularLinkState(n, tuple(t_arcs), tuple(y for _, y in through))
    if not (p.is_valid() and q.is_valid()):
        return None
    t = len(through)
    if t == 0:
        return AnnularDiagram(p, q, 0)
    bpos = {d: i for i, d in enumerate(p.defects)}
    qpos = {d: i for i, d in enumerate(q.defects)}
    shifts = {(bpos[x] - qpos[y]) % t for x, y in through}
    if len(shifts) != 1:
        return None
    s = shifts.pop()
    diag = AnnularDiagram(p, q, s)
    if diag.to_partition() != rho:
        return None
    return diag


def require_annular(rho: SetPartition) -> AnnularDiagram:
    d = decompose_annular(rho)
    if d is None:
        raise NotAnnularError(f"{rho} is not an annular diagram")
    return d


def is_annular(rho: SetPartition) -> bool:
    return decompose_annular(rho) is not None
