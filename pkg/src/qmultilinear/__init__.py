"""Multilinear representability of q-matroids by matrix rank-metric codes."""

from .gf import GF, field_make, field_of_order
from .linalg import Subspace, gaussian_binom, lattice
from .qmatroid import QMatroid, qm_dual, qm_from_code
from .rmcode import MatrixCode, code_make, dual, rho_c

__version__ = "0.1.0"

__all__ = [
    "GF",
    "MatrixCode",
    "QMatroid",
    "Subspace",
    "code_make",
    "dual",
    "field_make",
    "field_of_order",
    "gaussian_binom",
    "lattice",
    "qm_dual",
    "qm_from_code",
    "rho_c",
]
