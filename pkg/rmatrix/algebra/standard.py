"""Standard matrix Lie algebras.

Factories for the algebras shipped with rmatrix: sl(n) and gl(n) in the
elementary basis or in a basis adapted to the skew-symmetric plus upper
triangular split, sl(2) in the (H, X, Y) basis, and the two-dimensional
non-abelian algebra [X, Y] = X.
"""

import re
from typing import Any, Literal
import logging

import numpy as np

from rmatrix.algebra.liealg import LieAlgebra, build_algebra

logger = logging.getLogger(__name__)

BasisKind = Literal["standard", "skew-upper"]


def _unit(n: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((n, n))
    E[i, j] = 1.0
    return E


def _cartan(n: int) -> list[np.ndarray]:
    return [_unit(n, k, k) - _unit(n, k + 1, k + 1) for k in range(n - 1)]


def _skew_upper_basis(n: int, traceless: bool) -> list[np.ndarray]:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    skew = [_unit(n, i, j) - _unit(n, j, i) for i, j in pairs]
    upper = [_unit(n, i, j) for i, j in pairs]
    diagonal = _cartan(n) if traceless else [_unit(n, k, k) for k in range(n)]
    return skew + upper + diagonal


def skew_upper_indices(n: int, traceless: bool = True) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Index sets (g_plus, g_minus) of the skew-upper basis.

    g_plus spans the skew-symmetric matrices, g_minus the upper triangular
    ones (traceless for sl(n)).
    """
    n_skew = n * (n - 1) // 2
    dim = n * n - 1 if traceless else n * n
    return tuple(range(n_skew)), tuple(range(n_skew, dim))


def sl(n: int, basis: BasisKind = "standard", config: dict[str, Any] | None = None) -> LieAlgebra:
    """Special linear algebra sl(n).

    The standard basis lists E_ij (i < j), then E_ij (i > j), then
    H_k = E_kk - E_(k+1)(k+1).
    """
    if n < 2:
        raise ValueError(f"sl(n) needs n >= 2, got {n}")
    match basis:
        case "standard":
            upper = [_unit(n, i, j) for i in range(n) for j in range(i + 1, n)]
            lower = [_unit(n, i, j) for i in range(n) for j in range(i)]
            mats = upper + lower + _cartan(n)
            name = f"sl{n}"
        case "skew-upper":
            mats = _skew_upper_basis(n, traceless=True)
            name = f"sl{n}-split"
        case _:
            raise ValueError(f"Unknown basis kind: {basis}")
    return build_algebra(mats, name=name, config=config)


def gl(n: int, basis: BasisKind = "standard", config: dict[str, Any] | None = None) -> LieAlgebra:
    """General linear algebra gl(n); the standard basis is E_ij row-major."""
    if n < 1:
        raise ValueError(f"gl(n) needs n >= 1, got {n}")
    match basis:
        case "standard":
            mats = [_unit(n, i, j) for i in range(n) for j in range(n)]
            name = f"gl{n}"
        case "skew-upper":
            mats = _skew_upper_basis(n, traceless=False)
            name = f"gl{n}-split"
        case _:
            raise ValueError(f"Unknown basis kind: {basis}")
    return build_algebra(mats, name=name, config=config)


def sl2(config: dict[str, Any] | None = None) -> LieAlgebra:
    """sl(2) with basis (H, X, Y): [H, X] = 2X, [H, Y] = -2Y, [X, Y] = H."""
    H = np.diag([1.0, -1.0])
    X = _unit(2, 0, 1)
    Y = _unit(2, 1, 0)
    return build_algebra([H, X, Y], name="sl2", config=config)


def affine_2d(config: dict[str, Any] | None = None) -> LieAlgebra:
    """Two-dimensional algebra with basis (X, Y) and [X, Y] = X."""
    X = _unit(2, 0, 1)
    Y = -_unit(2, 0, 0)
    return build_algebra([X, Y], name="affine2", config=config)


_NAME_PATTERN = re.compile(r"^(sl|gl)(\d+)(-split)?$")


def by_name(name: str, config: dict[str, Any] | None = None) -> LieAlgebra:
    """Resolve a shipped algebra name such as sl3, sl3-split, gl2 or affine2."""
    key = name.strip().lower()
    if key == "sl2":
        return sl2(config)
    if key == "affine2":
        return affine_2d(config)

    match = _NAME_PATTERN.match(key)
    if match is None:
        raise KeyError(f"Unknown algebra name: {name}")
    family, size, split = match.groups()
    basis: BasisKind = "skew-upper" if split else "standard"
    factory = sl if family == "sl" else gl
    return factory(int(size), basis=basis, config=config)
