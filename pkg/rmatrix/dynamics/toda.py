"""Toda lattices.

Three constructions of the Toda chain on sl(N+1):

    open      skew-symmetric plus upper triangular split, Flaschka variables
    cartan    n_+ + h + n_- split, coordinates (eta, omega) of the group factors
    periodic  shift-operator lattice L = a_n S^-1 + b_n + S on n sites

The periodic lattice is realised as n x n cyclic band matrices.
"""

from dataclasses import dataclass, field
from typing import Any, Literal
import logging

import numpy as np

from rmatrix.algebra.dialgebra import REndomorphism, r_from_map
from rmatrix.algebra.liealg import AlgebraElement, LieAlgebra, PolynomialObservable
from rmatrix.algebra.standard import gl, sl
from rmatrix.dynamics.lax_flows import IntegratorConfig, Trajectory, integrate, rk4_step
from rmatrix.errors import BadPeriod, BadSize, LengthMismatch, NonPositiveEta, RMatrixError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TodaChain:
    """Flaschka state of an (N+1)-site open chain."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if self.b.ndim != 1 or self.b.size < 1:
            raise BadSize(f"Toda chain needs N >= 1 off-diagonal entries, got {self.b.size}")
        if self.a.shape != (self.b.size + 1,):
            raise LengthMismatch(
                f"Toda chain: a has {self.a.size} entries, expected {self.b.size + 1}"
            )

    @property
    def N(self) -> int:
        return self.b.size


@dataclass(frozen=True, eq=False)
class CartanCoordinates:
    """Group data Y = diag(eta), W_+ = 1 + omega_plus, W_- = 1 + omega_minus.

    omega_plus is read above the diagonal and omega_minus below it.
    """

    eta: np.ndarray
    omega_plus: np.ndarray
    omega_minus: np.ndarray

    def __post_init__(self) -> None:
        eta = np.asarray(self.eta, dtype=float)
        size = eta.size
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "omega_plus", np.triu(np.asarray(self.omega_plus, dtype=float), 1))
        object.__setattr__(self, "omega_minus", np.tril(np.asarray(self.omega_minus, dtype=float), -1))
        if size < 2:
            raise BadSize(f"Cartan coordinates need at least two sites, got {size}")
        if self.omega_plus.shape != (size, size) or self.omega_minus.shape != (size, size):
            raise LengthMismatch(f"omega arrays must be {size}x{size}")
        if np.any(eta <= 0):
            raise NonPositiveEta(f"eta must be strictly positive, got {eta.tolist()}")
        det = float(np.prod(eta))
        if abs(det - 1.0) > 1e-12:
            raise RMatrixError(f"det Y = prod(eta) must be 1, got {det:.15g}")

    @property
    def N(self) -> int:
        return self.eta.size - 1

    @property
    def w(self) -> np.ndarray:
        """w_i = (omega+_(i,i+1) - omega-_(i+1,i)) / 2."""
        return 0.5 * (np.diag(self.omega_plus, 1) - np.diag(self.omega_minus, -1))

    @property
    def z(self) -> np.ndarray:
        """z_i = 2 eta_(i+1) / eta_i."""
        return 2.0 * self.eta[1:] / self.eta[:-1]

    @property
    def Y(self) -> np.ndarray:
        return np.diag(self.eta)

    @property
    def W_plus(self) -> np.ndarray:
        return np.eye(self.eta.size) + self.omega_plus

    @property
    def W_minus(self) -> np.ndarray:
        return np.eye(self.eta.size) + self.omega_minus


@dataclass(frozen=True, eq=False)
class ShiftLattice:
    """Periodic lattice L = a_n S^-1 + b_n + S."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if self.b.size < 2:
            raise BadPeriod(f"periodic lattice needs at least two sites, got {self.b.size}")
        if self.a.shape != self.b.shape:
            raise LengthMismatch(f"bands differ in length: a {self.a.size}, b {self.b.size}")

    @property
    def n_sites(self) -> int:
        return self.b.size

    @property
    def bands(self) -> dict[int, np.ndarray]:
        return {-1: self.a, 0: self.b, 1: np.ones(self.n_sites)}


@dataclass
class PeriodicRun:
    """RK4 run of the periodic lattice."""

    trajectory: Trajectory
    lattices: list[ShiftLattice] = field(default_factory=list)


def toda_algebra(N: int) -> LieAlgebra:
    """sl(N+1) in the basis adapted to the skew plus upper triangular split."""
    if N < 1:
        raise BadSize(f"Toda chain needs N >= 1, got {N}")
    return sl(N + 1, basis="skew-upper")


def _algebra_for(N: int, algebra: LieAlgebra | None) -> LieAlgebra:
    if algebra is None:
        return toda_algebra(N)
    if algebra.matrix_size != N + 1:
        raise BadSize(f"{algebra.name} has matrix size {algebra.matrix_size}, chain needs {N + 1}")
    return algebra


def lambda_matrix(N: int, algebra: LieAlgebra | None = None) -> AlgebraElement:
    """Path-graph adjacency matrix of size N+1, the standard orbit representative."""
    if N < 1:
        raise BadSize(f"lambda_matrix needs N >= 1, got {N}")
    algebra = _algebra_for(N, algebra)
    ones = np.ones(N)
    return algebra.element_from_matrix(np.diag(ones, 1) + np.diag(ones, -1))


def lax_from_flaschka(chain: TodaChain, algebra: LieAlgebra | None = None) -> AlgebraElement:
    """Symmetric tridiagonal L with diagonal a and off-diagonal b."""
    algebra = _algebra_for(chain.N, algebra)
    L = np.diag(chain.a) + np.diag(chain.b, 1) + np.diag(chain.b, -1)
    return algebra.element_from_matrix(L)


def flaschka_from_lax(L: AlgebraElement | np.ndarray) -> TodaChain:
    """Read (a, b) off a tridiagonal Lax matrix (b from the sub-diagonal)."""
    M = L.matrix if isinstance(L, AlgebraElement) else np.asarray(L, dtype=float)
    return TodaChain(np.diag(M).copy(), np.diag(M, -1).copy())


def toda_rhs(chain: TodaChain) -> tuple[np.ndarray, np.ndarray]:
    """Open Toda equations in Flaschka coordinates.

    da_j = 2(b_j^2 - b_(j-1)^2) with b_0 = b_(N+1) = 0, db_j = b_j (a_(j+1) - a_j).
    """
    b2 = np.concatenate([[0.0], chain.b**2, [0.0]])
    da = 2.0 * (b2[1:] - b2[:-1])
    db = chain.b * (chain.a[1:] - chain.a[:-1])
    return da, db


def open_toda_r_matrix(algebra: LieAlgebra) -> REndomorphism:
    """R = P_+ - P_- for g = skew-symmetric + upper triangular.

    X = K + U with K = low - low^T (low the strictly lower part of X), so
    R(X) = K - U = 2K - X.
    """
    def split(X: np.ndarray) -> np.ndarray:
        low = np.tril(X, -1)
        return 2.0 * (low - low.T) - X

    return r_from_map(algebra, split)


def cartan_r_matrix(algebra: LieAlgebra) -> REndomorphism:
    """R = P_n+ - P_n- for g = n_+ + h + n_-; h is in the kernel."""
    return r_from_map(algebra, lambda X: np.triu(X, 1) - np.tril(X, -1))


def cartan_R_action(element: AlgebraElement, side: Literal["plus", "minus"]) -> AlgebraElement:
    """R_+ = P_n+ + P_h/2 and R_- = -(P_n- + P_h/2) applied to an element."""
    return cartan_r_matrix(element.algebra).apply_side(element, side)


def cartan_hamiltonian() -> PolynomialObservable:
    """H = -tr(L^2), the Cartan-split Hamiltonian in the [L, M] orientation.

    dL/dt = [L, R_+ grad H] with this H is dL/dt = [R_+ grad tr(L^2), L],
    the Cartan Lax equation; in Flaschka variables it is the open Toda flow
    of tr(L^2)/2 at the same time t.
    """
    return PolynomialObservable.trace_power(1, scale=-2.0)


def cartan_to_flaschka(coords: CartanCoordinates) -> TodaChain:
    """Flaschka variables from Cartan coordinates.

    a_1 = w_1 z_1 / 2, a_i = (w_i z_i - w_(i-1) z_(i-1)) / 2, a_(N+1) = -w_N z_N / 2,
    b_i = z_i / 2.
    """
    wz = np.concatenate([[0.0], coords.w * coords.z, [0.0]])
    a = 0.5 * (wz[1:] - wz[:-1])
    b = 0.5 * coords.z
    return TodaChain(a, b)


def cartan_orbit_lax(coords: CartanCoordinates, algebra: LieAlgebra | None = None) -> AlgebraElement:
    """Evaluate L = R*_+(W_+ Y Lambda Y^-1 W_+^-1) - R*_-(W_- Y^-1 Lambda Y W_-^-1).

    R*_+ = P_n- + P_h/2 and -R*_- = P_n+ + P_h/2.
    """
    N = coords.N
    algebra = _algebra_for(N, algebra)
    Lambda = lambda_matrix(N, algebra).matrix
    Y, Yinv = coords.Y, np.diag(1.0 / coords.eta)
    Wp, Wm = coords.W_plus, coords.W_minus

    A = Wp @ Y @ Lambda @ Yinv @ np.linalg.inv(Wp)
    B = Wm @ Yinv @ Lambda @ Y @ np.linalg.inv(Wm)
    L = (
        np.tril(A, -1) + 0.5 * np.diag(np.diag(A))
        + np.triu(B, 1) + 0.5 * np.diag(np.diag(B))
    )
    return algebra.element_from_matrix(L)


def open_toda_flow(
    chain: TodaChain,
    integrator: IntegratorConfig,
    config: dict[str, Any] | None = None,
    algebra: LieAlgebra | None = None,
) -> Trajectory:
    """RK4 run of the open chain with H_1 = tr(L^2)/2."""
    algebra = _algebra_for(chain.N, algebra)
    R = open_toda_r_matrix(algebra)
    H1 = PolynomialObservable.trace_power(1)
    return integrate(R, H1, lax_from_flaschka(chain, algebra), integrator, "plus", config)


def shift_matrix(n: int, power: int = 1) -> np.ndarray:
    """Cyclic shift S^power with S[i, i+1] = 1."""
    return np.roll(np.eye(n), power, axis=1)


def bm_lax_matrix(lattice: ShiftLattice) -> np.ndarray:
    """n x n cyclic band matrix: a on the sub-diagonal, b on the diagonal, 1 above."""
    n = lattice.n_sites
    return (
        np.diag(lattice.a) @ shift_matrix(n, -1)
        + np.diag(lattice.b)
        + shift_matrix(n, 1)
    )


def bm_band_matrix(da: np.ndarray, db: np.ndarray) -> np.ndarray:
    """da S^-1 + db as a dense matrix."""
    n = np.size(db)
    return np.diag(da) @ shift_matrix(n, -1) + np.diag(db)


def bm_rhs(lattice: ShiftLattice) -> tuple[np.ndarray, np.ndarray]:
    """Band form of dL/dt = [(L)_>=0, L] with (L)_>=0 = b_n + S.

    The [b, S] terms cancel, leaving
        da_n = a_n (b_n - b_(n-1)),   db_n = a_(n+1) - a_n.
    """
    a, b = lattice.a, lattice.b
    da = a * (b - np.roll(b, 1))
    db = np.roll(a, -1) - a
    return da, db


def bm_dense_rhs(lattice: ShiftLattice) -> np.ndarray:
    """[(L)_>=0, L] evaluated with dense matrices."""
    n = lattice.n_sites
    L = bm_lax_matrix(lattice)
    positive = np.diag(lattice.b) + shift_matrix(n, 1)
    return positive @ L - L @ positive


def bm_trace_powers(lattice: ShiftLattice, k_max: int = 3) -> np.ndarray:
    """tr(L^k) for k = 1..k_max."""
    L = bm_lax_matrix(lattice)
    values = []
    power = np.eye(lattice.n_sites)
    for _ in range(k_max):
        power = power @ L
        values.append(float(np.trace(power)))
    return np.array(values)


def bm_state(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pack the bands as (a_1..a_n, b_1..b_n)."""
    return np.concatenate([np.asarray(a, dtype=float), np.asarray(b, dtype=float)])


def bm_from_state(state: np.ndarray) -> ShiftLattice:
    state = np.asarray(state, dtype=float)
    if state.size % 2:
        raise LengthMismatch(f"packed lattice state has odd length {state.size}")
    n = state.size // 2
    return ShiftLattice(state[:n], state[n:])


def bm_integrate(lattice: ShiftLattice, integrator: IntegratorConfig) -> PeriodicRun:
    """RK4 run of the periodic lattice on the band variables."""
    n = lattice.n_sites
    algebra = gl(n)

    def rhs(state: np.ndarray) -> np.ndarray:
        return bm_state(*bm_rhs(bm_from_state(state)))

    run = PeriodicRun(Trajectory(algebra))
    state = bm_state(lattice.a, lattice.b)
    run.trajectory.record(0.0, bm_lax_matrix(lattice).reshape(-1), n_trace_powers=2)
    run.lattices.append(lattice)

    n_steps = integrator.n_steps
    t = 0.0
    for step in range(1, n_steps + 1):
        t_next = integrator.time_at(step)
        state = rk4_step(rhs, state, t_next - t)
        t = t_next
        if step % integrator.record_every == 0 or step == n_steps:
            current = bm_from_state(state.copy())
            run.trajectory.record(t, bm_lax_matrix(current).reshape(-1), n_trace_powers=2)
            run.lattices.append(current)

    logger.info(f"Integrated periodic lattice on {n} sites: {n_steps} steps")
    return run


def bm_trace_drift(run: PeriodicRun, k_max: int = 3) -> dict[str, float]:
    """Max drift of tr(L^k), k = 1..k_max, along a periodic run."""
    series = np.array([bm_trace_powers(lattice, k_max) for lattice in run.lattices])
    return {f"tr_L{k + 1}": float(np.abs(series[:, k] - series[0, k]).max()) for k in range(k_max)}


def subalgebra_admissibility(k: int) -> bool:
    """Whether operators of order >= k (and < k) split the shift algebra.

    Both closure inequalities 2k >= k and 2k - 2 < k hold only for k = 0, 1.
    """
    return (2 * k >= k) and (2 * k - 2 < k)
