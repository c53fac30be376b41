"""Sparse Gaussian elimination over Q and prime fields.

Vectors are dicts ``index -> nonzero value``. Elimination pivots on the
largest row index of each incoming column, the usual column-reduction order
for boundary matrices.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from typing import Any

from ..errors import UnsupportedRingError
from .rings import CoefficientRing
from .sparse import SparseMatrix


def _require_field(ring: CoefficientRing) -> None:
    if not ring.is_field:
        raise UnsupportedRingError(f"{ring.spec} is not a field")


def axpy(y: dict, a, x: Mapping, p: int | None) -> None:
    """In place ``y += a * x``; ``p`` is the characteristic or None for Q."""
    if p is None:
        for i, v in x.items():
            w = y.get(i, 0) + a * v
            if w:
                y[i] = w
            else:
                y.pop(i, None)
    else:
        for i, v in x.items():
            w = (y.get(i, 0) + a * v) % p
            if w:
                y[i] = w
            else:
                y.pop(i, None)


class FieldEchelon:
    """Incrementally grown echelon basis of a subspace.

    With ``track=True`` every pivot remembers how it is written in terms of
    the labelled vectors passed to :meth:`add`, so membership tests can also
    return coordinates.
    """

    def __init__(self, ring: CoefficientRing, track: bool = False):
        _require_field(ring)
        self.ring = ring
        self.p = ring.modulus
        self.track = track
        self.pivots: dict[int, tuple[dict, dict | None]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _inv(self, a):
        return pow(a, -1, self.p) if self.p else 1 / a

    def reduce(self, vec: Mapping[int, Any]) -> tuple[dict, dict]:
        """Return ``(residual, coords)`` with ``vec = residual + sum coords[l] * added[l]``.

        Reduction stops at the first leading entry without a pivot, so the
        residual is nonzero exactly when ``vec`` lies outside the span.
        """
        p = self.p
        res = dict(vec)
        coords: dict = {}
        pivots = self.pivots
        while res:
            r = max(res)
            ent = pivots.get(r)
            if ent is None:
                break
            pv, ph = ent
            c = res[r]
            axpy(res, -c if p is None else (p - c) % p, pv, p)
            if self.track:
                axpy(coords, c, ph, p)
        return res, coords

    def add(self, vec: Mapping[int, Any], label: Hashable = None) -> bool:
        """Insert ``vec``; return True when it enlarges the span."""
        res, coords = self.reduce(vec)
        if not res:
            return False
        p = self.p
        lead = max(res)
        inv = self._inv(res[lead])
        pv = {i: (v * inv) % p if p else v * inv for i, v in res.items()}
        ph = None
        if self.track:
            h = {label: 1}
            axpy(h, -1 if p is None else p - 1, coords, p)
            ph = {i: (v * inv) % p if p else v * inv for i, v in h.items()}
        self.pivots[lead] = (pv, ph)
        return True

    def contains(self, vec: Mapping[int, Any]) -> bool:
        res, _ = self.reduce(vec)
        return not res


def rank(m: SparseMatrix, ring: CoefficientRing, stop_at: int | None = None) -> int:
    """Rank of ``m`` over a field; stops early once ``stop_at`` is reached."""
    _require_field(ring)
    ech = FieldEchelon(ring)
    for c in m.columns():
        if c:
            ech.add(_reduced(c, ring))
            if stop_at is not None and ech.rank >= stop_at:
                break
    return ech.rank


def rank_of_vectors(vectors: Iterable[Mapping[int, Any]], ring: CoefficientRing) -> int:
    ech = FieldEchelon(ring)
    for v in vectors:
        if v:
            ech.add(_reduced(v, ring))
    return ech.rank


def rank_kernel(m: SparseMatrix, ring: CoefficientRing) -> tuple[int, list[dict]]:
    """Rank and a basis of the right kernel of ``m`` over a field."""
    _require_field(ring)
    p = ring.modulus
    ech = FieldEchelon(ring, track=True)
    kernel = []
    for j, c in enumerate(m.columns()):
        col = _reduced(c, ring)
        if not col:
            kernel.append({j: ring.one})
            continue
        res, coords = ech.reduce(col)
        if res:
            ech.add(col, label=j)
        else:
            k = {j: ring.one}
            axpy(k, -1 if p is None else p - 1, coords, p)
            kernel.append(k)
    return ech.rank, kernel


def solve(m: SparseMatrix, b: Mapping[int, Any], ring: CoefficientRing) -> dict | None:
    """Some ``x`` with ``m x = b``, or None when the system is inconsistent."""
    _require_field(ring)
    ech = FieldEchelon(ring, track=True)
    for j, c in enumerate(m.columns()):
        col = _reduced(c, ring)
        if col:
            ech.add(col, label=j)
    res, coords = ech.reduce(_reduced(b, ring))
    if res:
        return None
    return coords


def _reduced(vec: Mapping[int, Any], ring: CoefficientRing) -> dict:
    red = ring.reduce
    out = {}
    for i, v in vec.items():
        w = red(v)
        if w:
            out[i] = w
    return out
