"""Lie algebra layer: matrix algebras, dialgebras and bialgebras."""

from rmatrix.algebra.liealg import (
    AlgebraElement,
    LieAlgebra,
    PolynomialObservable,
    build_algebra,
)
from rmatrix.algebra.standard import affine_2d, by_name, gl, sl, sl2
from rmatrix.algebra.dialgebra import REndomorphism, MCYBEReport, r_from_split
from rmatrix.algebra.bialgebra import TensorR

__all__ = [
    "AlgebraElement",
    "LieAlgebra",
    "PolynomialObservable",
    "build_algebra",
    "affine_2d",
    "by_name",
    "gl",
    "sl",
    "sl2",
    "REndomorphism",
    "MCYBEReport",
    "r_from_split",
    "TensorR",
]
