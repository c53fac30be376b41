"""Mayer-Vietoris complexes of ideal covers.

Degree -1 is spanned by the full-propagation diagrams (a basis of A/I),
degree 0 by all of A, and degree p >= 1 by pairs ``(S, v)`` with ``S`` a
p-subset of cover indices and ``v`` a basis diagram of the intersection over
``S``. Summands are ordered lexicographically by ``S`` and then by ``v``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

from .algebra import get_algebra
from .covers import CoverDescriptor
from .errors import BudgetExceeded, PreconditionError
from .exactla.homology import ChainComplex, HomologyGroup, chain_homology
from .exactla.rings import CoefficientRing
from .exactla.sparse import SparseMatrix

DEFAULT_MV_BUDGET = 5_000_000


def sign_count(S, j: int) -> int:
    """Number of elements of ``S`` smaller than ``j``."""
    if j not in S:
        raise PreconditionError(f"{j} is not an element of {sorted(S)}")
    return sum(1 for i in S if i < j)


@dataclass
class MVComplex:
    cover: CoverDescriptor
    labels: dict  # degree -> list of labels
    complex: ChainComplex
    memberships: dict  # basis index v -> tuple S(v) of cover indices containing v

    @property
    def degrees(self) -> list[int]:
        return sorted(self.labels)

    def rank(self, p: int) -> int:
        return len(self.labels.get(p, []))

    def d(self, p: int) -> SparseMatrix:
        return self.complex.d(p)

    def manifest(self) -> dict:
        A = get_algebra(self.cover.algebra)
        tags = self.cover.tags

        def lab(p, x):
            if p <= 0:
                return A.serialize(x)
            S, v = x
            return {"subset": [list(tags[k]) for k in S], "diagram": A.serialize(v)}

        return {
            "algebra": str(self.cover.algebra),
            "width": self.cover.width,
            "height": self.cover.height,
            "degrees": self.degrees,
            "ranks": {str(p): self.rank(p) for p in self.degrees},
            "labels": {str(p): [lab(p, x) for x in self.labels[p]] for p in self.degrees},
        }


def build_mv(cover: CoverDescriptor, degree_limit: int | None = None, budget: int | None = DEFAULT_MV_BUDGET) -> MVComplex:
    """Assemble the augmented complex over Z (entries 0 and +-1)."""
    w = cover.width
    pmax = w if degree_limit is None else degree_limit
    if pmax > w:
        raise PreconditionError(f"degree limit {pmax} exceeds width {w}")
    A = get_algebra(cover.algebra)
    N = len(A.basis)
    member: dict[int, list[int]] = {}
    for k, I in enumerate(cover.ideals):
        for v in I.basis:
            member.setdefault(v, []).append(k)
    memberships = {v: tuple(ks) for v, ks in member.items()}
    total = N + sum(2 ** len(ks) - 1 for ks in memberships.values())
    if budget is not None and total > budget:
        raise BudgetExceeded(f"Mayer-Vietoris complex of {cover.algebra}", total, budget)

    labels: dict[int, list] = {-1: list(A.full_indices), 0: list(range(N))}
    for p in range(1, pmax + 1):
        labels[p] = sorted((S, v) for v, ks in memberships.items() for S in itertools.combinations(ks, p))
    while pmax >= 1 and not labels[pmax]:
        del labels[pmax]
        pmax -= 1

    index = {p: {x: i for i, x in enumerate(labels[p])} for p in labels}
    diffs: dict[int, SparseMatrix] = {}
    full_pos = index[-1]
    diffs[0] = SparseMatrix._trusted(len(labels[-1]), N, [{full_pos[v]: 1} if v in full_pos else {} for v in range(N)])
    for p in range(1, pmax + 1):
        cols = []
        lower = index[p - 1]
        for S, v in labels[p]:
            if p == 1:
                cols.append({lower[v]: 1})
                continue
            col = {}
            for pos, j in enumerate(S):
                rest = S[:pos] + S[pos + 1:]
                col[lower[(rest, v)]] = -1 if pos % 2 else 1
            cols.append(col)
        diffs[p] = SparseMatrix._trusted(len(labels[p - 1]), len(labels[p]), cols)
    cx = ChainComplex({p: len(x) for p, x in labels.items()}, diffs)
    return MVComplex(cover, labels, cx, memberships)


def check_square_zero(c: MVComplex) -> bool:
    return c.complex.check_square_zero(CoefficientRing.integers())


def check_acyclic(c: MVComplex, ring: CoefficientRing | None = None) -> dict:
    """Homology of the augmented complex in every degree."""
    ring = ring or CoefficientRing.integers()
    groups: dict[int, HomologyGroup] = {}
    for p in c.degrees:
        groups[p] = chain_homology(c.d(p), c.d(p + 1), ring, check=False)
    return {
        "ring": ring.spec,
        "square_zero": check_square_zero(c),
        "homology": {str(p): g.to_dict() for p, g in groups.items()},
        "acyclic": all(g.is_zero for g in groups.values()),
    }


def simplex_decomposition_check(c: MVComplex) -> bool:
    """The complex splits over basis diagrams into augmented simplex complexes."""
    for p in c.degrees:
        if p < 1:
            continue
        for (S, v) in c.labels[p]:
            if not set(S) <= set(c.memberships.get(v, ())):
                return False
    A = get_algebra(c.cover.algebra)
    index = {p: {x: i for i, x in enumerate(c.labels[p])} for p in c.degrees}
    for v in range(len(A.basis)):
        sv = c.memberships.get(v, ())
        if not sv:
            # only the copies in degrees 0 and -1, joined by the identity
            if not A.full[v]:
                return False
            col = c.d(0).column(v)
            if col != {index[-1][v]: 1}:
                return False
            continue
        if A.full[v] or v in index[-1]:
            return False
        if c.d(0).column(v):
            return False
        for p in range(1, len(sv) + 1):
            if p not in index:
                return False
            for S in itertools.combinations(sv, p):
                pos = index[p].get((S, v))
                if pos is None:
                    return False
                col = c.d(p).column(pos)
                if p == 1:
                    expect = {index[0][v]: 1}
                else:
                    expect = {}
                    for j in S:
                        rest = tuple(x for x in S if x != j)
                        expect[index[p - 1][(rest, v)]] = (-1) ** sign_count(S, j)
                if col != expect:
                    return False
    return True


def export(c: MVComplex, directory) -> Path:
    """Write ``manifest.json`` plus ``d_<p>.txt`` triplet files."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    man = c.manifest()
    man["differentials"] = {}
    for p in c.degrees:
        name = f"d_{p}.txt"
        (out / name).write_text(c.d(p).to_triplet_text())
        man["differentials"][str(p)] = name
    (out / "manifest.json").write_text(json.dumps(man, indent=2, sort_keys=True) + "\n")
    return out
