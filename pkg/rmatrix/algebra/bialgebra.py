"""Coboundary Lie bialgebras.

Tensor r-matrices r = r^ij e_i (x) e_j, their coboundary cocycle
delta r(X) = [X (x) 1 + 1 (x) X, r], the dual bracket on g*, Schouten and
<r, r> brackets, the tensor form of the classical Yang-Baxter equation, the
first Russian formula and the double g + g*.

Dual vectors are coefficient arrays over the abstract dual basis e^i
(e^i(e_j) = delta_ij), not over the trace identification; use
to_trace_dual / from_trace_dual to move between the two.

Index conventions:
    rbar(xi)^j = sum_i xi_i r^ij, so that <eta, rbar xi> = r(xi, eta)
    (ad*_X xi)_j = -sum c^k_ij X^i xi_k
"""

from dataclasses import dataclass
from typing import Any, Literal
import logging

import numpy as np

from rmatrix.algebra.dialgebra import REndomorphism
from rmatrix.algebra.liealg import AlgebraElement, LieAlgebra, jacobi_residual
from rmatrix.errors import (
    DimensionMismatch,
    DualJacobiFails,
    NotAntisymmetric,
    SingularSymmetricPart,
    SymPartNotInvariant,
)
from rmatrix.utils.config_utils import tolerance

logger = logging.getLogger(__name__)

Classification = Literal["triangular", "factorisable", "quasi-triangular", "none"]


@dataclass(frozen=True, eq=False)
class TensorR:
    """An element r = r^ij e_i (x) e_j of g (x) g."""

    algebra: LieAlgebra
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        n = self.algebra.dim
        if np.shape(self.coeffs) != (n, n):
            raise DimensionMismatch(
                f"{self.algebra.name}: tensor must be {n}x{n}, got {np.shape(self.coeffs)}"
            )

    @property
    def a(self) -> np.ndarray:
        """Skew part (r - r^T) / 2."""
        return 0.5 * (self.coeffs - self.coeffs.T)

    @property
    def s(self) -> np.ndarray:
        """Symmetric part (r + r^T) / 2."""
        return 0.5 * (self.coeffs + self.coeffs.T)

    def skew_part(self) -> "TensorR":
        return TensorR(self.algebra, self.a)

    def symmetric_part(self) -> "TensorR":
        return TensorR(self.algebra, self.s)

    def to_kronecker(self) -> np.ndarray:
        """sum r^ij kron(e_i, e_j) in the defining representation."""
        E = self.algebra.basis
        m = self.algebra.matrix_size
        return np.einsum("ij,iab,jcd->acbd", self.coeffs, E, E).reshape(m * m, m * m)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "tensor", "coeffs": self.coeffs.tolist()}


@dataclass(frozen=True, eq=False)
class ThreeTensor:
    """Element of g (x) g (x) g as an n x n x n coefficient array."""

    values: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def antisymmetry_defect(self) -> float:
        v = self.values
        swaps = (v + v.transpose(1, 0, 2), v + v.transpose(0, 2, 1), v + v.transpose(2, 1, 0))
        return float(max(np.abs(s).max() for s in swaps)) if v.size else 0.0


@dataclass(frozen=True, eq=False)
class BialgebraDouble:
    """The double d = g + g* of a coboundary bialgebra.

    Coefficients are ordered (e_1..e_n, e^1..e^n); structure_constants[u, v, w]
    is the e_w / e^w component of [u, v]_d.
    """

    base: LieAlgebra
    r: TensorR
    structure_constants: np.ndarray
    inner_product: np.ndarray

    @property
    def dim(self) -> int:
        return 2 * self.base.dim

    def embed(self, X: np.ndarray | None = None, xi: np.ndarray | None = None) -> np.ndarray:
        n = self.base.dim
        X = np.zeros(n) if X is None else np.asarray(X, dtype=float)
        xi = np.zeros(n) if xi is None else np.asarray(xi, dtype=float)
        return np.concatenate([X, xi])

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,j,ijk->k", u, v, self.structure_constants)

    def invariance_residual(self) -> float:
        """Max |<[u,v]|w> + <v|[u,w]>| over all basis triples."""
        D, Q = self.structure_constants, self.inner_product
        first = np.einsum("uvk,kw->uvw", D, Q)
        second = np.einsum("vk,uwk->uvw", Q, D)
        return float(np.abs(first + second).max())

    def jacobi_residual(self) -> float:
        return jacobi_residual(self.structure_constants)


def _check_dual(algebra: LieAlgebra, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.shape != (algebra.dim,):
        raise DimensionMismatch(f"{algebra.name}: dual vector must have {algebra.dim} entries, got {xi.shape}")
    return xi


def _ad_matrices(algebra: LieAlgebra) -> np.ndarray:
    """ad[k][i, l] = c^i_kl, the adjoint matrix of e_k."""
    return np.einsum("kli->kil", algebra.structure_constants)


def to_trace_dual(algebra: LieAlgebra, xi: np.ndarray) -> AlgebraElement:
    """Element X with tr(XY) = xi(Y) for all Y."""
    xi = _check_dual(algebra, xi)
    return algebra.element(np.linalg.solve(algebra.pairing_gram, xi))


def from_trace_dual(X: AlgebraElement) -> np.ndarray:
    """Dual vector Y -> tr(XY)."""
    return X.algebra.pairing_gram @ X.coeffs


def rbar(r: TensorR, xi: np.ndarray) -> AlgebraElement:
    """The map g* -> g of r, contracting the left slot."""
    xi = _check_dual(r.algebra, xi)
    return AlgebraElement(r.algebra, r.coeffs.T @ xi)


def coadjoint_dual(algebra: LieAlgebra, X: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """(ad*_X xi)(Y) = -xi([X, Y]) on the abstract dual."""
    return -np.einsum("i,ijk,k->j", X, algebra.structure_constants, _check_dual(algebra, xi))


def ad2(algebra: LieAlgebra, X: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Adjoint action of X on g (x) g: (X (x) 1 + 1 (x) X) . T."""
    adX = np.einsum("k,kli->il", X, algebra.structure_constants)
    return adX @ T + T @ adX.T


def cocycle(r: TensorR, X: AlgebraElement) -> np.ndarray:
    """delta r(X)^ij = c^i_kl X^k r^lj + c^j_kl X^k r^il."""
    if X.algebra is not r.algebra:
        raise DimensionMismatch(f"cocycle: X lives in {X.algebra.name}, r in {r.algebra.name}")
    return ad2(r.algebra, X.coeffs, r.coeffs)


def _coboundaries(algebra: LieAlgebra, T: np.ndarray) -> np.ndarray:
    """delta T(e_k) for every basis vector, shape (n, n, n)."""
    ad = _ad_matrices(algebra)
    return np.einsum("kil,lj->kij", ad, T) + np.einsum("il,kjl->kij", T, ad)


def sym_invariance_residual(r: TensorR) -> float:
    """Max Frobenius norm of delta s(e_k) over the basis."""
    return float(np.linalg.norm(_coboundaries(r.algebra, r.s), axis=(1, 2)).max())


def cocycle_condition_residual(r: TensorR) -> float:
    """Max over basis pairs of |ad_X delta r(Y) - ad_Y delta r(X) - delta r([X, Y])|."""
    algebra = r.algebra
    C = algebra.structure_constants
    delta = _coboundaries(algebra, r.coeffs)
    worst = 0.0
    for i in range(algebra.dim):
        ei = algebra.basis_element(i).coeffs
        for j in range(algebra.dim):
            ej = algebra.basis_element(j).coeffs
            term = (
                ad2(algebra, ei, delta[j])
                - ad2(algebra, ej, delta[i])
                - np.einsum("m,mab->ab", C[i, j], delta)
            )
            worst = max(worst, float(np.linalg.norm(term)))
    return worst


def _require_invariant_s(r: TensorR, config: dict[str, Any] | None) -> float:
    residual = sym_invariance_residual(r)
    if residual > tolerance(config, "invariance"):
        raise SymPartNotInvariant(
            f"{r.algebra.name}: symmetric part is not ad-invariant (residual {residual:.3e})"
        )
    return residual


def dual_structure_constants(r: TensorR, config: dict[str, Any] | None = None) -> np.ndarray:
    """f[p, q, k] = ([e^p, e^q]_r)_k built from the skew part.

    Raises:
        SymPartNotInvariant: If s is not ad-invariant
    """
    _require_invariant_s(r, config)
    C, a = r.algebra.structure_constants, r.a
    return np.einsum("klp,lq->pqk", C, a) + np.einsum("klq,pl->pqk", C, a)


def bracket_star(
    r: TensorR, xi: np.ndarray, eta: np.ndarray, config: dict[str, Any] | None = None
) -> np.ndarray:
    """[xi, eta]_r = ad*_{abar xi} eta - ad*_{abar eta} xi.

    Raises:
        SymPartNotInvariant: If s is not ad-invariant
    """
    xi = _check_dual(r.algebra, xi)
    eta = _check_dual(r.algebra, eta)
    return np.einsum("p,q,pqk->k", xi, eta, dual_structure_constants(r, config))


def cocycle_bracket(r: TensorR, xi: np.ndarray, eta: np.ndarray) -> np.ndarray:
    """Transpose of the full cocycle: [xi, eta](Z) = (xi (x) eta)(delta r(Z))."""
    xi = _check_dual(r.algebra, xi)
    eta = _check_dual(r.algebra, eta)
    return np.einsum("p,q,kpq->k", xi, eta, _coboundaries(r.algebra, r.coeffs))


def dual_jacobi_residual(r: TensorR, config: dict[str, Any] | None = None) -> float:
    return jacobi_residual(dual_structure_constants(r, config))


def schouten(a: TensorR, config: dict[str, Any] | None = None) -> ThreeTensor:
    """[[a, a]](xi, eta, zeta) = -2(<zeta,[a xi, a eta]> + <xi,[a eta, a zeta]> + <eta,[a zeta, a xi]>).

    Raises:
        NotAntisymmetric: If a is not skew
    """
    coeffs = a.coeffs
    defect = float(np.abs(coeffs + coeffs.T).max())
    if defect > tolerance(config, "identity") * max(1.0, float(np.abs(coeffs).max())):
        raise NotAntisymmetric(f"{a.algebra.name}: tensor is not skew (defect {defect:.3e})")
    T = np.einsum("pa,qb,abt->pqt", coeffs, coeffs, a.algebra.structure_constants)
    values = -2.0 * (T + np.einsum("qtp->pqt", T) + np.einsum("tpq->pqt", T))
    return ThreeTensor(values)


def rr_bracket(r: TensorR, config: dict[str, Any] | None = None) -> ThreeTensor:
    """<r, r>(xi, eta, zeta) = <zeta, [rbar xi, rbar eta] - rbar [xi, eta]_r>.

    Raises:
        SymPartNotInvariant: If s is not ad-invariant
    """
    f = dual_structure_constants(r, config)
    T1 = np.einsum("pa,qb,abt->pqt", r.coeffs, r.coeffs, r.algebra.structure_constants)
    return ThreeTensor(T1 - np.einsum("pqk,kt->pqt", f, r.coeffs))


def cybe_tensor(r: TensorR) -> ThreeTensor:
    """[r12, r13] + [r12, r23] + [r13, r23] in components."""
    C, c = r.algebra.structure_constants, r.coeffs
    r12_r13 = np.einsum("aci,aj,ck->ijk", C, c, c)
    r12_r23 = np.einsum("ib,bcj,ck->ijk", c, C, c)
    r13_r23 = np.einsum("ib,jd,bdk->ijk", c, c, C)
    return ThreeTensor(r12_r13 + r12_r23 + r13_r23)


def russian_formula(r: TensorR, L: np.ndarray) -> np.ndarray:
    """{L (x), L} = [L (x) I + I (x) L, r] in the defining representation.

    Raises:
        DimensionMismatch: If L is not m x m
    """
    m = r.algebra.matrix_size
    L = np.asarray(L, dtype=float)
    if L.shape != (m, m):
        raise DimensionMismatch(f"{r.algebra.name}: L must be {m}x{m}, got {L.shape}")
    identity = np.eye(m)
    lifted = np.kron(L, identity) + np.kron(identity, L)
    rk = r.to_kronecker()
    return lifted @ rk - rk @ lifted


def factorisable_to_R(r: TensorR, config: dict[str, Any] | None = None) -> REndomorphism:
    """R = abar o sbar^-1 on coefficient space.

    Raises:
        SymPartNotInvariant: If s is not ad-invariant
        SingularSymmetricPart: If s is not invertible
    """
    _require_invariant_s(r, config)
    s = r.s
    scale = max(1.0, float(np.abs(s).max()))
    if np.linalg.matrix_rank(s, tol=1e-10 * scale) < r.algebra.dim:
        raise SingularSymmetricPart(f"{r.algebra.name}: symmetric part of r is singular")
    return REndomorphism(r.algebra, r.a.T @ np.linalg.inv(s))


def classify(r: TensorR, config: dict[str, Any] | None = None) -> dict[str, Any]:
    """Classify r as triangular, factorisable, quasi-triangular or none.

    Returns:
        Dictionary with the classification and the residuals that decided it
    """
    tensor_tol = tolerance(config, "tensor")
    invariance = sym_invariance_residual(r)
    s_norm = float(np.linalg.norm(r.s))
    schouten_norm = schouten(r.skew_part(), config).norm()

    result: dict[str, Any] = {
        "sym_invariance_residual": invariance,
        "symmetric_part_norm": s_norm,
        "schouten_norm": schouten_norm,
        "rr_norm": None,
        "symmetric_part_invertible": False,
    }

    invariant = invariance <= tolerance(config, "invariance")
    if invariant:
        result["rr_norm"] = rr_bracket(r, config).norm()
        scale = max(1.0, float(np.abs(r.s).max()))
        result["symmetric_part_invertible"] = bool(
            np.linalg.matrix_rank(r.s, tol=1e-10 * scale) == r.algebra.dim
        )

    classification: Classification = "none"
    if s_norm <= tensor_tol and schouten_norm <= tensor_tol:
        classification = "triangular"
    elif invariant and result["rr_norm"] <= tensor_tol:
        classification = "factorisable" if result["symmetric_part_invertible"] else "quasi-triangular"

    result["classification"] = classification
    logger.info(f"{r.algebra.name}: r classified as {classification}")
    return result


def build_bialgebra_double(r: TensorR, config: dict[str, Any] | None = None) -> BialgebraDouble:
    """Lie algebra structure on g + g* extending both brackets.

    [X, xi]_d = ad*_X xi - ad*_xi X.

    Raises:
        SymPartNotInvariant: If s is not ad-invariant
        DualJacobiFails: If [.,.]_r violates Jacobi beyond tolerances.dual_jacobi
    """
    algebra = r.algebra
    n = algebra.dim
    f = dual_structure_constants(r, config)
    residual = jacobi_residual(f)
    if residual > tolerance(config, "dual_jacobi"):
        raise DualJacobiFails(f"{algebra.name}: dual bracket Jacobi residual {residual:.3e}")

    C = algebra.structure_constants
    D = np.zeros((2 * n, 2 * n, 2 * n))
    D[:n, :n, :n] = C
    D[n:, n:, n:] = f
    # [e_i, e^j]_d: g-part f[j, k, i], g*-part -c^j_ik
    mixed = np.zeros((n, n, 2 * n))
    mixed[:, :, :n] = np.einsum("jki->ijk", f)
    mixed[:, :, n:] = -np.einsum("ikj->ijk", C)
    D[:n, n:, :] = mixed
    D[n:, :n, :] = -mixed.transpose(1, 0, 2)

    Q = np.block([[np.zeros((n, n)), np.eye(n)], [np.eye(n), np.zeros((n, n))]])
    double = BialgebraDouble(base=algebra, r=r, structure_constants=D, inner_product=Q)
    logger.info(
        f"Built bialgebra double of {algebra.name}: dim {2 * n}, "
        f"invariance residual {double.invariance_residual():.3e}"
    )
    return double
