"""rmatrix - Classical r-matrix toolkit.

Lie dialgebras and bialgebras with Yang-Baxter certificates, factorisation
solvers for Lax equations and the Toda lattice constructions built on them.
"""

__version__ = "1.0.0"

from rmatrix.algebra.liealg import (
    LieAlgebra,
    AlgebraElement,
    PolynomialObservable,
    build_algebra,
)
from rmatrix.algebra.dialgebra import REndomorphism, MCYBEReport
from rmatrix.algebra.bialgebra import TensorR
from rmatrix.runner import RMatrixRunner

__all__ = [
    "LieAlgebra",
    "AlgebraElement",
    "PolynomialObservable",
    "build_algebra",
    "REndomorphism",
    "MCYBEReport",
    "TensorR",
    "RMatrixRunner",
    "__version__",
]
