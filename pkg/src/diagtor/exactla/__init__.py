"""Exact sparse linear algebra over Z, Q, F_p and Z/m."""

from .rings import CoefficientRing
from .sparse import SparseMatrix
from .fieldla import FieldEchelon, rank, rank_kernel, solve
from .intla import ColumnReduction, IntegerLattice, kernel_basis, solve_integer, xgcd
from .snf import SmithForm, determinant, invariant_factors, smith_normal_form

__all__ = [
    "CoefficientRing",
    "SparseMatrix",
    "FieldEchelon",
    "rank",
    "rank_kernel",
    "solve",
    "ColumnReduction",
    "IntegerLattice",
    "kernel_basis",
    "solve_integer",
    "xgcd",
    "SmithForm",
    "determinant",
    "invariant_factors",
    "smith_normal_form",
]

from .homology import ChainComplex, HomologyGroup, InducedMap, chain_homology, homology_induced_map  # noqa: E402

__all__ += ["ChainComplex", "HomologyGroup", "InducedMap", "chain_homology", "homology_induced_map"]
