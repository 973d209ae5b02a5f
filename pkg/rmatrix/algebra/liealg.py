"""Matrix Lie algebras.

Finite-dimensional Lie algebras given by an explicit basis of square
matrices. Elements are coefficient vectors over that basis; brackets and
pairings are evaluated through the precomputed structure constants and the
trace Gram matrix, and matrices are only materialised when needed.

Dual elements are identified with algebra elements through the trace form
<X|Y> = tr(XY), so the same AlgebraElement type carries both.
"""

from dataclasses import dataclass, field
from typing import Any, Literal, Sequence
import logging

import numpy as np

from rmatrix.errors import (
    AlgebraMismatch,
    DependentBasis,
    DimensionMismatch,
    NotClosed,
    ProjectionLoss,
    Singular,
)
from rmatrix.utils.config_utils import tolerance

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """A matrix Lie algebra with precomputed structure constants.

    Attributes:
        name: Identifier used in reports
        basis: Array of shape (n, m, m) holding the basis matrices e_i
        structure_constants: Array C with C[i, j, k] = c^k_ij, [e_i, e_j] = c^k_ij e_k
        pairing_gram: G[i, j] = tr(e_i e_j)
    """

    name: str
    basis: np.ndarray
    structure_constants: np.ndarray
    pairing_gram: np.ndarray
    _expander: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def matrix_size(self) -> int:
        return self.basis.shape[1]

    def to_matrix(self, coeffs: np.ndarray) -> np.ndarray:
        """Materialise sum_i coeffs_i e_i (works on stacked coefficient arrays)."""
        return np.tensordot(np.asarray(coeffs, dtype=float), self.basis, axes=1)

    def expand(self, matrix: np.ndarray) -> tuple[np.ndarray, float]:
        """Least-squares coefficients of a matrix and the Frobenius defect."""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (self.matrix_size, self.matrix_size):
            raise DimensionMismatch(
                f"{self.name}: expected {self.matrix_size}x{self.matrix_size} matrix, "
                f"got shape {matrix.shape}"
            )
        coeffs = self._expander @ matrix.reshape(-1)
        defect = float(np.linalg.norm(matrix - self.to_matrix(coeffs)))
        return coeffs, defect

    def element(self, coeffs: Sequence[float] | np.ndarray) -> "AlgebraElement":
        """Wrap a coefficient vector as an element of this algebra."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.dim,):
            raise DimensionMismatch(
                f"{self.name}: expected {self.dim} coefficients, got shape {coeffs.shape}"
            )
        return AlgebraElement(self, coeffs.copy())

    def element_from_matrix(
        self, matrix: np.ndarray, config: dict[str, Any] | None = None
    ) -> "AlgebraElement":
        """Re-expand a matrix in the basis.

        Raises:
            NotClosed: If the matrix is not in the span of the basis
        """
        coeffs, defect = self.expand(matrix)
        if defect > tolerance(config, "closure"):
            raise NotClosed(f"{self.name}: matrix leaves the basis span (defect {defect:.3e})")
        return AlgebraElement(self, coeffs)

    def basis_element(self, index: int) -> "AlgebraElement":
        coeffs = np.zeros(self.dim)
        coeffs[index] = 1.0
        return AlgebraElement(self, coeffs)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, np.zeros(self.dim))

    def matrix_norm(self, coeffs: np.ndarray) -> np.ndarray:
        """Frobenius norm of the matrix form, over the last axis of coeffs."""
        return np.linalg.norm(self.to_matrix(coeffs), axis=(-2, -1))

    def bracket_coeffs(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """[x, y] in coefficient space."""
        return np.einsum("i,j,ijk->k", x, y, self.structure_constants)

    def jacobi_residual(self) -> float:
        return jacobi_residual(self.structure_constants)

    def __repr__(self) -> str:
        return f"LieAlgebra(name={self.name!r}, dim={self.dim}, matrix_size={self.matrix_size})"


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Coefficient vector over the basis of an algebra."""

    algebra: LieAlgebra
    coeffs: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.algebra.to_matrix(self.coeffs)

    def _check(self, other: "AlgebraElement") -> None:
        if other.algebra is not self.algebra:
            raise AlgebraMismatch(
                f"operands live in {self.algebra.name} and {other.algebra.name}"
            )

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        return AlgebraElement(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, -self.coeffs)

    def __mul__(self, scalar: float) -> "AlgebraElement":
        return AlgebraElement(self.algebra, float(scalar) * self.coeffs)

    __rmul__ = __mul__

    def norm(self) -> float:
        """Frobenius norm of the matrix form."""
        return float(np.linalg.norm(self.matrix))

    def allclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=0.0, atol=atol))


@dataclass(frozen=True, eq=False)
class PolynomialObservable:
    """A trace power H_l(L) = scale * tr(L^(l+1)) / (l+1) or a linear functional <L|X>.

    The default scale 1 gives H_1 = tr(L^2)/2; scale 2 gives the tr(L^2)
    normalisation.
    """

    kind: Literal["trace_power", "linear"]
    degree: int = 1
    direction: AlgebraElement | None = None
    scale: float = 1.0

    @classmethod
    def trace_power(cls, degree: int, scale: float = 1.0) -> "PolynomialObservable":
        if degree < 1:
            raise ValueError(f"Trace power degree must be >= 1, got {degree}")
        return cls("trace_power", degree=degree, scale=scale)

    @classmethod
    def linear(cls, direction: AlgebraElement) -> "PolynomialObservable":
        return cls("linear", degree=0, direction=direction)

    @property
    def name(self) -> str:
        match self.kind:
            case "trace_power":
                prefix = "" if self.scale == 1.0 else f"{self.scale:g}*"
                return f"{prefix}H{self.degree}"
            case _:
                return "linear"

    def __call__(self, L: AlgebraElement) -> float:
        match self.kind:
            case "trace_power":
                power = np.linalg.matrix_power(L.matrix, self.degree + 1)
                return float(self.scale * np.trace(power) / (self.degree + 1))
            case _:
                return pairing(L, self.direction)


def build_algebra(
    basis: Sequence[np.ndarray] | np.ndarray,
    name: str = "custom",
    config: dict[str, Any] | None = None,
) -> LieAlgebra:
    """Build a Lie algebra from a list of basis matrices.

    Args:
        basis: Square matrices of a common size
        name: Identifier for reports
        config: Optional configuration (tolerances.closure)

    Returns:
        LieAlgebra with structure constants and Gram matrix populated

    Raises:
        DimensionMismatch: If matrices are not square or differ in size
        DependentBasis: If the basis matrices are linearly dependent
        NotClosed: If a commutator leaves the span of the basis
    """
    mats = [np.asarray(b, dtype=float) for b in basis]
    if not mats:
        raise DimensionMismatch(f"{name}: empty basis")
    size = mats[0].shape
    if len(size) != 2 or size[0] != size[1] or any(m.shape != size for m in mats):
        raise DimensionMismatch(f"{name}: basis matrices must be square and of equal size")

    E = np.stack(mats)
    n, m = E.shape[0], E.shape[1]
    V = E.reshape(n, m * m)

    singular_values = np.linalg.svd(V, compute_uv=False)
    if n > m * m or singular_values[-1] <= 1e-10 * max(singular_values[0], 1.0):
        raise DependentBasis(f"{name}: basis of {n} matrices has rank below {n}")

    expander = np.linalg.pinv(V.T)

    products = np.einsum("iab,jbc->ijac", E, E)
    commutators = products - products.transpose(1, 0, 2, 3)
    flat = commutators.reshape(n, n, m * m)
    C = flat @ expander.T
    defects = np.linalg.norm(flat - C @ V, axis=-1)

    worst = np.unravel_index(np.argmax(defects), defects.shape)
    if defects[worst] > tolerance(config, "closure"):
        raise NotClosed(
            f"{name}: [e_{worst[0]}, e_{worst[1]}] leaves the span "
            f"(defect {defects[worst]:.3e})"
        )

    gram = np.einsum("iab,jba->ij", E, E)

    algebra = LieAlgebra(
        name=name,
        basis=E,
        structure_constants=C,
        pairing_gram=gram,
        _expander=expander,
    )
    logger.info(f"Built algebra {name}: dim={n}, matrix size={m}")
    logger.debug(f"{name}: closure defect {float(defects.max()):.3e}")
    return algebra


def jacobi_residual(structure_constants: np.ndarray) -> float:
    """Max |sum_m c^m_ij c^l_mk + cyclic| over all index quadruples."""
    C = np.asarray(structure_constants, dtype=float)
    J = (
        np.einsum("ijm,mkl->ijkl", C, C)
        + np.einsum("jkm,mil->ijkl", C, C)
        + np.einsum("kim,mjl->ijkl", C, C)
    )
    return float(np.abs(J).max()) if J.size else 0.0


def _check_same(*elements: AlgebraElement) -> LieAlgebra:
    algebra = elements[0].algebra
    for other in elements[1:]:
        if other.algebra is not algebra:
            raise AlgebraMismatch(
                f"operands live in {algebra.name} and {other.algebra.name}"
            )
    return algebra


def bracket(X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    """Lie bracket [X, Y] through the structure constants."""
    algebra = _check_same(X, Y)
    return AlgebraElement(algebra, algebra.bracket_coeffs(X.coeffs, Y.coeffs))


def pairing(X: AlgebraElement, Y: AlgebraElement) -> float:
    """Trace form <X|Y> = tr(XY)."""
    algebra = _check_same(X, Y)
    return float(X.coeffs @ algebra.pairing_gram @ Y.coeffs)


def coadjoint(X: AlgebraElement, L: AlgebraElement) -> AlgebraElement:
    """ad*_X L under the trace identification.

    Returns L' with <L'|Y> = -<L|[X, Y]> for every Y, which for the trace
    form is the commutator [X, L].
    """
    return bracket(X, L)


def gradient(
    phi: PolynomialObservable,
    L: AlgebraElement,
    config: dict[str, Any] | None = None,
) -> AlgebraElement:
    """Gradient of an observable with respect to the trace form.

    For H_l the gradient is L^l projected onto the basis span; the part of
    L^l outside the span (a multiple of the identity for sl(n)) pairs to zero
    with the algebra and is dropped.

    Raises:
        ProjectionLoss: If the dropped part pairs nontrivially with the basis
    """
    algebra = L.algebra
    match phi.kind:
        case "linear":
            _check_same(L, phi.direction)
            return phi.direction
        case "trace_power":
            power = np.linalg.matrix_power(L.matrix, phi.degree)
            coeffs, defect = algebra.expand(power)
            residual = power - algebra.to_matrix(coeffs)
            leakage = float(np.abs(np.einsum("ab,iba->i", residual, algebra.basis)).max())
            if leakage > tolerance(config, "projection"):
                raise ProjectionLoss(
                    f"{algebra.name}: L^{phi.degree} leaves the basis span, "
                    f"discarded part pairs with the basis at {leakage:.3e}"
                )
            if defect > 0:
                logger.debug(f"{algebra.name}: projected L^{phi.degree} (defect {defect:.3e})")
            return AlgebraElement(algebra, phi.scale * coeffs)
        case _:
            raise ValueError(f"Unknown observable kind: {phi.kind}")


def finite_difference_derivatives(
    phi: PolynomialObservable, L: AlgebraElement, step: float | None = None
) -> np.ndarray:
    """Central differences of phi along every basis direction."""
    algebra = L.algebra
    h = step if step is not None else 1e-6 * (1.0 + L.norm())
    derivatives = np.empty(algebra.dim)
    for j in range(algebra.dim):
        e = algebra.basis_element(j)
        derivatives[j] = (phi(L + h * e) - phi(L - h * e)) / (2.0 * h)
    return derivatives


def gradient_check(
    phi: PolynomialObservable,
    L: AlgebraElement,
    config: dict[str, Any] | None = None,
) -> float:
    """Relative error between the exact gradient and central differences.

    The exact directional derivative along e_j is <grad phi|e_j>.
    """
    exact = L.algebra.pairing_gram @ gradient(phi, L, config).coeffs
    numeric = finite_difference_derivatives(phi, L)
    scale = max(1.0, float(np.abs(exact).max()))
    return float(np.abs(exact - numeric).max() / scale)


def lie_poisson(
    phi: PolynomialObservable,
    psi: PolynomialObservable,
    L: AlgebraElement,
    config: dict[str, Any] | None = None,
) -> float:
    """Lie-Poisson bracket {phi, psi}(L) = <L|[grad phi, grad psi]>."""
    return pairing(L, bracket(gradient(phi, L, config), gradient(psi, L, config)))


def hamiltonian_vector_field(
    H: PolynomialObservable,
    L: AlgebraElement,
    config: dict[str, Any] | None = None,
) -> AlgebraElement:
    """Lie-Poisson equation of motion dL/dt = ad*_{grad H} L.

    With this orientation dF/dt = {F, H} for every observable F.
    """
    return coadjoint(gradient(H, L, config), L)


def orbit_tangency_residual(
    L: AlgebraElement,
    X: AlgebraElement,
    casimirs: Sequence[PolynomialObservable],
    config: dict[str, Any] | None = None,
) -> float:
    """Max |<grad C(L)|ad*_X L>| over the given Casimirs.

    Vanishes because ad*_X L is tangent to the coadjoint orbit through L,
    on which every Casimir is constant.
    """
    tangent = coadjoint(X, L)
    values = [abs(pairing(gradient(C, L, config), tangent)) for C in casimirs]
    return max(values, default=0.0)


def casimir_tensor(algebra: LieAlgebra) -> np.ndarray:
    """Inverse of the trace Gram matrix, the ad-invariant element of g (x) g.

    Raises:
        Singular: If the trace form is degenerate on the algebra
    """
    gram = algebra.pairing_gram
    if np.linalg.matrix_rank(gram, tol=1e-10 * max(1.0, float(np.abs(gram).max()))) < algebra.dim:
        raise Singular(f"{algebra.name}: trace form is degenerate, no Casimir tensor")
    return np.linalg.inv(gram)


def algebra_to_dict(algebra: LieAlgebra, include_structure: bool = False) -> dict[str, Any]:
    """Serialise an algebra to the JSON description format.

    Args:
        algebra: Algebra to serialise
        include_structure: Also emit structure constants and Gram matrix

    Returns:
        Dictionary ready for json.dump
    """
    data: dict[str, Any] = {
        "name": algebra.name,
        "matrix_size": algebra.matrix_size,
        "basis": [b.reshape(-1).tolist() for b in algebra.basis],
    }
    if include_structure:
        data["structure_constants"] = algebra.structure_constants.tolist()
        data["pairing_gram"] = algebra.pairing_gram.tolist()
        data["jacobi_residual"] = algebra.jacobi_residual()
    return data
