"""Lie dialgebras.

An endomorphism R of g defines the second bracket
[X, Y]_R = 1/2([RX, Y] + [X, RY]). This module builds R (from a split
g = g_plus + g_minus, an explicit matrix, or a matrix-space map), evaluates
the R-bracket and the associated Lie-Poisson structure, scans the
modified classical Yang-Baxter equation over basis pairs, and constructs
the double of a dialgebra.

R acts on coefficient vectors by left multiplication: (RX)^k = R[k, i] X^i.
"""

from dataclasses import dataclass
from typing import Any, Callable, Iterable, Literal
import logging

import numpy as np
from scipy.linalg import block_diag

from rmatrix.algebra.liealg import (
    AlgebraElement,
    LieAlgebra,
    PolynomialObservable,
    build_algebra,
    gradient,
    pairing,
)
from rmatrix.errors import (
    AlgebraMismatch,
    DimensionMismatch,
    NotComplementary,
    NotMCYBE,
    NotSubalgebra,
    Singular,
)
from rmatrix.utils.config_utils import tolerance

logger = logging.getLogger(__name__)

Side = Literal["plus", "minus", "symmetric"]


@dataclass(frozen=True, eq=False)
class REndomorphism:
    """Linear map on the coefficient space of an algebra.

    Attributes:
        algebra: Algebra R acts on
        matrix: n x n array acting on coefficient vectors
        split: Optional (g_plus, g_minus) basis index sets R was built from
    """

    algebra: LieAlgebra
    matrix: np.ndarray
    split: tuple[tuple[int, ...], tuple[int, ...]] | None = None

    @property
    def plus(self) -> np.ndarray:
        """R_+ = (R + I) / 2."""
        return 0.5 * (self.matrix + np.eye(self.algebra.dim))

    @property
    def minus(self) -> np.ndarray:
        """R_- = (R - I) / 2."""
        return 0.5 * (self.matrix - np.eye(self.algebra.dim))

    def side_matrix(self, side: Side) -> np.ndarray:
        match side:
            case "plus":
                return self.plus
            case "minus":
                return self.minus
            case "symmetric":
                return 0.5 * self.matrix
            case _:
                raise ValueError(f"Unknown side: {side}")

    def __call__(self, X: AlgebraElement) -> AlgebraElement:
        if X.algebra is not self.algebra:
            raise AlgebraMismatch(f"R acts on {self.algebra.name}, element lives in {X.algebra.name}")
        return AlgebraElement(self.algebra, self.matrix @ X.coeffs)

    def apply_side(self, X: AlgebraElement, side: Side) -> AlgebraElement:
        if X.algebra is not self.algebra:
            raise AlgebraMismatch(f"R acts on {self.algebra.name}, element lives in {X.algebra.name}")
        return AlgebraElement(self.algebra, self.side_matrix(side) @ X.coeffs)

    def to_dict(self) -> dict[str, Any]:
        if self.split is not None:
            return {"kind": "split", "g_plus": list(self.split[0]), "g_minus": list(self.split[1])}
        return {"kind": "matrix", "entries": self.matrix.tolist()}


@dataclass(frozen=True)
class MCYBEReport:
    """Result of an mCYBE scan over basis pairs."""

    c: float
    max_residual: float
    worst_pair: tuple[int, int]

    def passed(self, tol: float) -> bool:
        return self.max_residual <= tol

    def to_dict(self) -> dict[str, Any]:
        return {
            "c": self.c,
            "max_residual": self.max_residual,
            "worst_pair": list(self.worst_pair),
        }


@dataclass(frozen=True, eq=False)
class DialgebraDouble:
    """The double d = g + g of a dialgebra.

    The ambient algebra holds pairs (X, Y) as block-diagonal matrices, with
    coefficients (x_1..x_n, y_1..y_n). p_gr projects onto the image of
    X -> (R_+ X, R_- X), p_delta onto the diagonal {(X, X)}.
    """

    base: LieAlgebra
    R: REndomorphism
    ambient: LieAlgebra
    p_gr: REndomorphism
    p_delta: REndomorphism

    def embed(self, X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
        if X.algebra is not self.base or Y.algebra is not self.base:
            raise AlgebraMismatch(f"double of {self.base.name} needs elements of {self.base.name}")
        return AlgebraElement(self.ambient, np.concatenate([X.coeffs, Y.coeffs]))

    def components(self, element: AlgebraElement) -> tuple[AlgebraElement, AlgebraElement]:
        n = self.base.dim
        return (
            AlgebraElement(self.base, element.coeffs[:n].copy()),
            AlgebraElement(self.base, element.coeffs[n:].copy()),
        )

    def r_double(self) -> REndomorphism:
        """r_d = P_gR - P_delta, the split r-matrix of the double."""
        return REndomorphism(self.ambient, self.p_gr.matrix - self.p_delta.matrix)

    def projection_residuals(self) -> dict[str, float]:
        P, Q = self.p_gr.matrix, self.p_delta.matrix
        identity = np.eye(self.ambient.dim)
        return {
            "complementarity": float(np.abs(P + Q - identity).max()),
            "idempotency_gr": float(np.abs(P @ P - P).max()),
            "idempotency_delta": float(np.abs(Q @ Q - Q).max()),
        }


def _subalgebra_defect(algebra: LieAlgebra, indices: tuple[int, ...]) -> tuple[float, tuple[int, int]]:
    """Largest part of [e_i, e_j] (i, j in indices) outside span{e_k : k in indices}."""
    if not indices:
        return 0.0, (-1, -1)
    idx = np.array(indices)
    outside = np.ones(algebra.dim, dtype=bool)
    outside[idx] = False
    C = algebra.structure_constants[np.ix_(idx, idx)]
    leak = np.where(outside, C, 0.0)
    norms = algebra.matrix_norm(leak)
    worst = np.unravel_index(np.argmax(norms), norms.shape)
    return float(norms[worst]), (int(idx[worst[0]]), int(idx[worst[1]]))


def r_from_split(
    algebra: LieAlgebra,
    g_plus: Iterable[int],
    g_minus: Iterable[int],
    config: dict[str, Any] | None = None,
) -> REndomorphism:
    """R = P_plus - P_minus for a basis adapted to g = g_plus + g_minus.

    Args:
        algebra: Algebra whose basis is adapted to the split
        g_plus: Basis indices spanning g_plus
        g_minus: Basis indices spanning g_minus
        config: Optional configuration (tolerances.closure)

    Raises:
        NotComplementary: If the index sets overlap or miss a basis index
        NotSubalgebra: If either span is not closed under the bracket
    """
    plus = tuple(sorted(int(i) for i in g_plus))
    minus = tuple(sorted(int(i) for i in g_minus))

    if set(plus) & set(minus):
        raise NotComplementary(f"{algebra.name}: split index sets overlap at {sorted(set(plus) & set(minus))}")
    if sorted(plus + minus) != list(range(algebra.dim)):
        raise NotComplementary(
            f"{algebra.name}: split index sets do not partition 0..{algebra.dim - 1}"
        )

    tol = tolerance(config, "closure")
    for label, indices in (("g_plus", plus), ("g_minus", minus)):
        defect, pair = _subalgebra_defect(algebra, indices)
        if defect > tol:
            raise NotSubalgebra(
                f"{algebra.name}: {label} not closed, [e_{pair[0]}, e_{pair[1]}] "
                f"leaves it by {defect:.3e}"
            )

    diagonal = np.zeros(algebra.dim)
    diagonal[list(plus)] = 1.0
    diagonal[list(minus)] = -1.0
    logger.info(f"Split R on {algebra.name}: dim g+ = {len(plus)}, dim g- = {len(minus)}")
    return REndomorphism(algebra, np.diag(diagonal), split=(plus, minus))


def r_from_matrix(algebra: LieAlgebra, entries: np.ndarray | list[list[float]]) -> REndomorphism:
    """Wrap an explicit n x n coefficient-space matrix."""
    matrix = np.asarray(entries, dtype=float)
    if matrix.shape != (algebra.dim, algebra.dim):
        raise DimensionMismatch(
            f"{algebra.name}: R must be {algebra.dim}x{algebra.dim}, got {matrix.shape}"
        )
    return REndomorphism(algebra, matrix.copy())


def r_from_map(
    algebra: LieAlgebra,
    fn: Callable[[np.ndarray], np.ndarray],
    config: dict[str, Any] | None = None,
) -> REndomorphism:
    """Build R from a linear map on matrices, column by column.

    Raises:
        NotClosed: If fn sends a basis matrix outside the algebra
    """
    columns = []
    for j in range(algebra.dim):
        image = fn(algebra.basis[j])
        columns.append(algebra.element_from_matrix(image, config).coeffs)
    return REndomorphism(algebra, np.column_stack(columns))


def adjoint(R: REndomorphism) -> REndomorphism:
    """R* with <RX|Y> = <X|R*Y> for the trace form.

    Raises:
        Singular: If the trace form is degenerate on the algebra
    """
    G = R.algebra.pairing_gram
    try:
        Ginv = np.linalg.inv(G)
    except np.linalg.LinAlgError as e:
        raise Singular(f"{R.algebra.name}: trace form is degenerate") from e
    return REndomorphism(R.algebra, Ginv @ R.matrix.T @ G)


def is_skew_symmetric(R: REndomorphism, config: dict[str, Any] | None = None) -> bool:
    """Whether R* = -R for the trace form."""
    defect = float(np.abs(adjoint(R).matrix + R.matrix).max())
    return defect <= tolerance(config, "closure") * max(1.0, float(np.abs(R.matrix).max()))


def bracket_R(R: REndomorphism, X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    """[X, Y]_R = 1/2([RX, Y] + [X, RY])."""
    algebra = R.algebra
    if X.algebra is not algebra or Y.algebra is not algebra:
        raise AlgebraMismatch(f"bracket_R on {algebra.name} got foreign elements")
    rx, ry = R.matrix @ X.coeffs, R.matrix @ Y.coeffs
    coeffs = 0.5 * (algebra.bracket_coeffs(rx, Y.coeffs) + algebra.bracket_coeffs(X.coeffs, ry))
    return AlgebraElement(algebra, coeffs)


def _r_bracket_table(R: REndomorphism) -> tuple[np.ndarray, np.ndarray]:
    """([Re_i, e_j] + [e_i, Re_j]) and [Re_i, Re_j] for all basis pairs."""
    M, C = R.matrix, R.algebra.structure_constants
    mixed = np.einsum("ai,ajk->ijk", M, C) + np.einsum("bj,ibk->ijk", M, C)
    both = np.einsum("ai,bj,abk->ijk", M, M, C)
    return mixed, both


def _bbar(R: REndomorphism) -> np.ndarray:
    """B[i, j] = [Re_i, Re_j] - R([Re_i, e_j] + [e_i, Re_j])."""
    mixed, both = _r_bracket_table(R)
    return both - np.einsum("kl,ijl->ijk", R.matrix, mixed)


def mcybe_residual(R: REndomorphism, c: float = 1.0) -> MCYBEReport:
    """Scan [RX, RY] - R([RX, Y] + [X, RY]) + c[X, Y] over basis pairs.

    c = 0 gives the classical Yang-Baxter equation.
    """
    algebra = R.algebra
    residual = _bbar(R) + c * algebra.structure_constants
    norms = algebra.matrix_norm(residual)
    worst = np.unravel_index(np.argmax(norms), norms.shape)
    report = MCYBEReport(c=float(c), max_residual=float(norms[worst]), worst_pair=(int(worst[0]), int(worst[1])))
    logger.debug(
        f"mCYBE on {algebra.name} (c={c}): max residual {report.max_residual:.3e} at {report.worst_pair}"
    )
    return report


def fit_mcybe_constant(R: REndomorphism) -> MCYBEReport:
    """Least-squares c minimising the mCYBE residual, with its report."""
    algebra = R.algebra
    B = algebra.to_matrix(_bbar(R)).reshape(-1)
    Cm = algebra.to_matrix(algebra.structure_constants).reshape(-1)
    denominator = float(Cm @ Cm)
    c = 0.0 if denominator == 0.0 else -float(B @ Cm) / denominator
    return mcybe_residual(R, c)


def jacobi_residual_R(R: REndomorphism) -> float:
    """Max over basis triples of |[B(e_i,e_j),e_k] + [B(e_k,e_i),e_j] + [B(e_j,e_k),e_i]|.

    The Jacobiator of [.,.]_R equals -1/4 of this cyclic sum, so a zero
    residual certifies that [.,.]_R is a Lie bracket.
    """
    algebra = R.algebra
    B, C = _bbar(R), algebra.structure_constants
    J = (
        np.einsum("ija,akl->ijkl", B, C)
        + np.einsum("kia,ajl->ijkl", B, C)
        + np.einsum("jka,ail->ijkl", B, C)
    )
    return float(algebra.matrix_norm(J).max())


def homomorphism_residual(R: REndomorphism, side: Literal["plus", "minus"]) -> float:
    """Max |[R_s e_i, R_s e_j] - R_s [e_i, e_j]_R| over basis pairs."""
    algebra = R.algebra
    P = R.side_matrix(side)
    C = algebra.structure_constants
    lhs = np.einsum("ai,bj,abk->ijk", P, P, C)
    mixed, _ = _r_bracket_table(R)
    rhs = np.einsum("kl,ijl->ijk", P, 0.5 * mixed)
    return float(algebra.matrix_norm(lhs - rhs).max())


def lie_poisson_R(
    R: REndomorphism,
    phi: PolynomialObservable,
    psi: PolynomialObservable,
    L: AlgebraElement,
    config: dict[str, Any] | None = None,
) -> float:
    """{phi, psi}_R(L) = 1/2 <L|[R grad phi, grad psi] + [grad phi, R grad psi]>."""
    return pairing(L, bracket_R(R, gradient(phi, L, config), gradient(psi, L, config)))


def m_matrix(
    R: REndomorphism,
    H: PolynomialObservable,
    L: AlgebraElement,
    side: Side,
    config: dict[str, Any] | None = None,
) -> AlgebraElement:
    """The M of the Lax pair generated by H.

    symmetric: 1/2 R(grad H); plus / minus: R_+(grad H) / R_-(grad H), which
    for a split R are P_+(grad H) and -P_-(grad H).
    """
    return R.apply_side(gradient(H, L, config), side)


def build_double(
    g: LieAlgebra, R: REndomorphism, config: dict[str, Any] | None = None
) -> DialgebraDouble:
    """Double of the dialgebra (g, g_R).

    Raises:
        NotMCYBE: If R fails mCYBE with c = 1 beyond the mcybe tolerance
    """
    if R.algebra is not g:
        raise AlgebraMismatch(f"R acts on {R.algebra.name}, not on {g.name}")

    report = mcybe_residual(R, 1.0)
    if report.max_residual > tolerance(config, "mcybe"):
        raise NotMCYBE(
            f"{g.name}: mCYBE(c=1) residual {report.max_residual:.3e} at basis pair {report.worst_pair}"
        )

    zero = np.zeros((g.matrix_size, g.matrix_size))
    basis = [block_diag(e, zero) for e in g.basis] + [block_diag(zero, e) for e in g.basis]
    ambient = build_algebra(basis, name=f"{g.name}-double", config=config)

    Rp, Rm = R.plus, R.minus
    p_gr = np.block([[Rp, -Rp], [Rm, -Rm]])
    p_delta = np.block([[-Rm, Rp], [-Rm, Rp]])

    double = DialgebraDouble(
        base=g,
        R=R,
        ambient=ambient,
        p_gr=REndomorphism(ambient, p_gr),
        p_delta=REndomorphism(ambient, p_delta),
    )
    residuals = double.projection_residuals()
    if max(residuals.values()) > tolerance(config, "identity"):
        logger.warning(f"{g.name}-double: projection residuals {residuals}")
    logger.info(f"Built double of {g.name}: dim {ambient.dim}")
    return double
