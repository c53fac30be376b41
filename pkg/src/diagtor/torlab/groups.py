"""Homology of cyclic and symmetric groups with trivial coefficients."""

from __future__ import annotations

from ..algebra import algebra_id
from ..errors import BudgetExceeded, PreconditionError
from ..exactla.homology import HomologyGroup, chain_homology
from ..exactla.rings import CoefficientRing
from ..exactla.sparse import SparseMatrix
from .bar import DEFAULT_BAR_BUDGET, reduced_bar

SYMMETRIC_DEFAULT_MAX_N = 4


def cyclic_tensored_differential(n: int, q: int, ring: CoefficientRing) -> SparseMatrix:
    """Degree-q differential of ``1 (x) P`` for the periodic resolution P of C_n.

    ``g - 1`` augments to 0 and the norm to n.
    """
    if q <= 0:
        return SparseMatrix.zeros(0, 1 if q == 0 else 0)
    if q % 2 == 1:
        return SparseMatrix.zeros(1, 1)
    v = ring.reduce(n)
    return SparseMatrix._trusted(1, 1, [{0: v} if v else {}])


def group_homology_cyclic(n: int, ring: CoefficientRing, q_max: int) -> list[HomologyGroup]:
    if n < 1:
        raise PreconditionError("n must be at least 1")
    out = []
    for q in range(q_max + 1):
        d_q, d_q1 = cyclic_tensored_differential(n, q, ring), cyclic_tensored_differential(n, q + 1, ring)
        out.append(chain_homology(d_q, d_q1, ring, check=False))
    return out


def cyclic_closed_form(n: int, q: int) -> HomologyGroup:
    """Integral homology of C_n: Z, then Z/n in odd degrees and 0 in even ones."""
    if q == 0:
        return HomologyGroup(1)
    if q % 2 == 1:
        return HomologyGroup(0, (n,) if n > 1 else ())
    return HomologyGroup(0)


def group_homology_symmetric(n: int, ring: CoefficientRing, q_max: int, budget: int | None = DEFAULT_BAR_BUDGET) -> list[HomologyGroup]:
    if n < 1:
        raise PreconditionError("n must be at least 1")
    if n > SYMMETRIC_DEFAULT_MAX_N and budget == DEFAULT_BAR_BUDGET:
        import math

        raise BudgetExceeded(f"symmetric group of degree {n}", math.factorial(n), math.factorial(SYMMETRIC_DEFAULT_MAX_N))
    return reduced_bar(algebra_id("symmetric", n), ring, q_max, budget).homology_all()
