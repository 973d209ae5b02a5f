"""Group factorisation solvers.

Matrix exponentials and the factorisation g = g_plus g_minus^-1 for the two
splits of sl(n) used by the Toda constructions:

    QR   g_plus orthogonal, g_minus^-1 upper triangular with positive diagonal
    LDU  g_plus = W_+ Y, g_minus = W_- Y^-1 with W_+ unit upper, W_- unit lower
         and Y positive diagonal

propagate() solves a Lax equation exactly by conjugating the initial value
with the factors of exp(t grad H(Lambda)).
"""

from dataclasses import dataclass
from typing import Any, Literal
import logging

import numpy as np
from scipy.linalg import expm as _scipy_expm, qr as _scipy_qr, solve_triangular

from rmatrix.algebra.liealg import AlgebraElement, PolynomialObservable, gradient
from rmatrix.errors import ExpmOverflow, OutsideFactorisationDomain, Singular
from rmatrix.utils.config_utils import DEFAULT_CONFIG

logger = logging.getLogger(__name__)

SplitKind = Literal["qr", "ldu"]


@dataclass(frozen=True, eq=False)
class GroupFactors:
    """g = g_plus g_minus^-1 with the residual of the reassembly."""

    g_plus: np.ndarray
    g_minus: np.ndarray
    split_kind: SplitKind
    residual: float
    diagonal: np.ndarray | None = None

    def reassemble(self) -> np.ndarray:
        return self.g_plus @ np.linalg.inv(self.g_minus)

    def orthogonality_defect(self) -> float:
        """||g_plus^T g_plus - I||_F, zero for the QR kind."""
        identity = np.eye(self.g_plus.shape[0])
        return float(np.linalg.norm(self.g_plus.T @ self.g_plus - identity))

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "split_kind": self.split_kind,
            "g_plus": self.g_plus.tolist(),
            "g_minus": self.g_minus.tolist(),
            "residual": self.residual,
        }
        if self.diagonal is not None:
            data["Y"] = self.diagonal.tolist()
        return data


@dataclass(frozen=True, eq=False)
class PropagationResult:
    """L(t) from both conjugation paths."""

    L: AlgebraElement
    L_minus_path: AlgebraElement
    path_difference: float
    factors: GroupFactors
    t: float


def expm(X: np.ndarray, t: float = 1.0, config: dict[str, Any] | None = None) -> np.ndarray:
    """exp(tX) by scaling and squaring.

    Raises:
        ExpmOverflow: If the 1-norm of tX exceeds factorization.expm_norm_bound
    """
    X = np.asarray(X, dtype=float)
    if not np.all(np.isfinite(X)):
        raise ExpmOverflow("expm: matrix has non-finite entries")
    bound = (config or DEFAULT_CONFIG).get("factorization", {}).get(
        "expm_norm_bound", DEFAULT_CONFIG["factorization"]["expm_norm_bound"]
    )
    norm = abs(t) * float(np.linalg.norm(X, 1))
    if norm > bound:
        raise ExpmOverflow(f"expm: |tX| = {norm:.3e} exceeds bound {bound:.3e}")
    return _scipy_expm(t * X)


def _check_square(g: np.ndarray) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise Singular(f"factorisation needs a square matrix, got shape {g.shape}")
    return g


def factor_qr(g: np.ndarray) -> GroupFactors:
    """g = Q R with Q orthogonal and diag(R) > 0; g_plus = Q, g_minus = R^-1.

    With a positive diagonal in R the sign of det Q equals the sign of
    det g, so det g = 1 gives det Q = +1.

    Raises:
        Singular: If g is not invertible
    """
    g = _check_square(g)
    Q, R = _scipy_qr(g)
    diag = np.diag(R)
    scale = max(1.0, float(np.abs(R).max()))
    if np.any(np.abs(diag) <= 1e-14 * scale):
        raise Singular("factor_qr: matrix is singular")

    signs = np.sign(diag)
    Q = Q * signs
    R = signs[:, None] * R

    n = g.shape[0]
    g_minus = solve_triangular(R, np.eye(n))
    residual = float(np.linalg.norm(g - Q @ R))
    logger.debug(f"QR factorisation ({n}x{n}): residual {residual:.3e}")
    return GroupFactors(g_plus=Q, g_minus=g_minus, split_kind="qr", residual=residual)


def _doolittle(a: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """a = L D U without pivoting, L unit lower, U unit upper.

    Raises:
        OutsideFactorisationDomain: On a non-positive pivot
    """
    n = a.shape[0]
    work = a.copy()
    L = np.eye(n)
    for k in range(n):
        pivot = work[k, k]
        if not pivot > 0:
            raise OutsideFactorisationDomain(
                f"factor_ldu: non-positive pivot {pivot:.3e} at step {k}"
            )
        L[k + 1 :, k] = work[k + 1 :, k] / pivot
        work[k + 1 :, k:] -= np.outer(L[k + 1 :, k], work[k, k:])
    D = np.diag(work).copy()
    U = np.triu(work) / D[:, None]
    return L, D, U


def factor_ldu(g: np.ndarray) -> GroupFactors:
    """g = W_+ Y^2 W_-^-1 with W_+ unit upper, W_- unit lower, Y > 0 diagonal.

    Computed from the Doolittle factorisation of J g J with J the reversal
    permutation, so the domain is positivity of the trailing principal
    minors of g. Returns g_plus = W_+ Y and g_minus = W_- Y^-1.

    Raises:
        OutsideFactorisationDomain: If a pivot is not strictly positive
    """
    g = _check_square(g)
    J = np.eye(g.shape[0])[::-1]
    L_rev, D_rev, U_rev = _doolittle(J @ g @ J)

    W_plus = J @ L_rev @ J
    W_minus_inv = J @ U_rev @ J
    Y = np.sqrt(D_rev[::-1])

    W_minus = solve_triangular(W_minus_inv, np.eye(g.shape[0]), lower=True, unit_diagonal=True)
    g_plus = W_plus * Y
    g_minus = W_minus / Y
    residual = float(np.linalg.norm(g - g_plus @ np.linalg.inv(g_minus)))
    logger.debug(f"LDU factorisation ({g.shape[0]}x{g.shape[0]}): residual {residual:.3e}")
    return GroupFactors(
        g_plus=g_plus, g_minus=g_minus, split_kind="ldu", residual=residual, diagonal=Y
    )


def factorise(g: np.ndarray, kind: SplitKind) -> GroupFactors:
    match kind:
        case "qr":
            return factor_qr(g)
        case "ldu":
            return factor_ldu(g)
        case _:
            raise ValueError(f"Unknown split kind: {kind}")


def propagate(
    Lambda: AlgebraElement,
    H: PolynomialObservable,
    t: float,
    split_kind: SplitKind,
    config: dict[str, Any] | None = None,
) -> PropagationResult:
    """L(t) = g_+(t)^-1 Lambda g_+(t) with exp(t grad H(Lambda)) = g_+ g_-^-1.

    The QR kind solves dL/dt = [L, P_+ grad H(L)] for the skew plus upper
    triangular split; the LDU kind solves dL/dt = [L, R_+ grad H(L)] with
    R_+ = P_n+ + P_h / 2.
    """
    algebra = Lambda.algebra
    if t == 0:
        factors = factorise(np.eye(algebra.matrix_size), split_kind)
        return PropagationResult(Lambda, Lambda, 0.0, factors, 0.0)

    X = gradient(H, Lambda, config).matrix
    factors = factorise(expm(X, t, config), split_kind)
    M = Lambda.matrix

    plus_path = np.linalg.solve(factors.g_plus, M @ factors.g_plus)
    minus_path = np.linalg.solve(factors.g_minus, M @ factors.g_minus)
    L_plus = algebra.element_from_matrix(plus_path, config)
    L_minus = algebra.element_from_matrix(minus_path, config)
    difference = float(np.linalg.norm(plus_path - minus_path))

    logger.info(
        f"Propagated {H.name} on {algebra.name} to t={t} ({split_kind}): "
        f"path difference {difference:.3e}, factor residual {factors.residual:.3e}"
    )
    return PropagationResult(L_plus, L_minus, difference, factors, float(t))
