"""Lax equation integration.

Direct numerical integration of dL/dt = [L, M(L)] with classical fourth
order Runge-Kutta on the coefficient vector of L, with a ledger of the
conserved quantities (trace powers and sorted eigenvalues) at every
recorded step.

Orientation: with M = R_+ grad H_1 for the skew plus upper triangular
split of sl(N+1), [L, M] reproduces the open Toda equations in Flaschka
coordinates.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence
import logging

import numpy as np

from rmatrix.algebra.dialgebra import REndomorphism, Side, lie_poisson_R, m_matrix
from rmatrix.algebra.liealg import AlgebraElement, LieAlgebra, PolynomialObservable, bracket
from rmatrix.errors import EmptyTrajectory, StepUnderflow
from rmatrix.utils.config_utils import DEFAULT_CONFIG, tolerance

logger = logging.getLogger(__name__)

MIN_STEP = 1e-12
STEP_SLACK = 1e-9

Rhs = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integrator settings."""

    step: float
    t_end: float
    method: str = "rk4"
    record_every: int = 1

    def __post_init__(self) -> None:
        if not self.step > 0:
            raise StepUnderflow(f"Integrator step must be positive, got {self.step}")
        if self.step < MIN_STEP:
            raise StepUnderflow(f"Integrator step {self.step:.3e} below {MIN_STEP:.0e}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be non-negative, got {self.t_end}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be positive, got {self.record_every}")
        if self.method != "rk4":
            raise ValueError(f"Unsupported method: {self.method}")

    @property
    def n_steps(self) -> int:
        """Steps needed to reach t_end; a ratio within STEP_SLACK of whole adds no step."""
        return max(0, int(np.ceil(self.t_end / self.step - STEP_SLACK)))

    def time_at(self, step: int) -> float:
        """End time of a step. The last step is shortened to land on t_end."""
        if step >= self.n_steps:
            return self.t_end
        return step * self.step

    @classmethod
    def from_config(cls, config: dict[str, Any] | None = None, **overrides: Any) -> "IntegratorConfig":
        section = dict(DEFAULT_CONFIG["integrator"])
        if config is not None:
            section.update(config.get("integrator", {}))
        section.update({k: v for k, v in overrides.items() if v is not None})
        return cls(
            step=float(section["step"]),
            t_end=float(section["t_end"]),
            method=section["method"],
            record_every=int(section["record_every"]),
        )


@dataclass
class Trajectory:
    """Recorded Lax matrices with their conserved-quantity ledger."""

    algebra: LieAlgebra
    times: list[float] = field(default_factory=list)
    states: list[np.ndarray] = field(default_factory=list)
    conserved: dict[str, list[float]] = field(default_factory=dict)
    eigenvalues: list[np.ndarray] = field(default_factory=list)

    def record(self, t: float, coeffs: np.ndarray, n_trace_powers: int) -> None:
        L = self.algebra.to_matrix(coeffs)
        self.times.append(float(t))
        self.states.append(L)
        power = np.eye(L.shape[0])
        for degree in range(1, n_trace_powers + 1):
            power = power @ L
            value = float(np.trace(power @ L) / (degree + 1))
            self.conserved.setdefault(f"H{degree}", []).append(value)
        self.eigenvalues.append(sorted_eigenvalues(L))

    @property
    def final(self) -> np.ndarray:
        if not self.states:
            raise EmptyTrajectory("Trajectory has no recorded states")
        return self.states[-1]

    def columns(self) -> list[str]:
        m = self.algebra.matrix_size
        entries = [f"L_{i + 1}{j + 1}" for i in range(m) for j in range(m)]
        eigs = [f"eig_{k + 1}" for k in range(m)]
        return ["t", *entries, *self.conserved.keys(), *eigs]

    def to_rows(self) -> list[list[float]]:
        """One row per record: t, flattened L, H_l values, real parts of the eigenvalues."""
        rows = []
        for index, t in enumerate(self.times):
            values = [series[index] for series in self.conserved.values()]
            eigs = np.real(self.eigenvalues[index]).tolist()
            rows.append([t, *self.states[index].reshape(-1).tolist(), *values, *eigs])
        return rows

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class ConservationReport:
    """Max drift of every conserved quantity along a trajectory."""

    drifts: dict[str, float]
    tolerance: float

    @property
    def max_drift(self) -> float:
        return max(self.drifts.values(), default=0.0)

    @property
    def passed(self) -> bool:
        return self.max_drift <= self.tolerance

    def failures(self) -> list[str]:
        return [name for name, drift in self.drifts.items() if drift > self.tolerance]

    def to_dict(self) -> dict[str, Any]:
        return {
            "drifts": dict(self.drifts),
            "max_drift": self.max_drift,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def sorted_eigenvalues(L: np.ndarray) -> np.ndarray:
    """Eigenvalues sorted by real then imaginary part (real array if symmetric)."""
    if np.allclose(L, L.T, rtol=0.0, atol=1e-12):
        return np.linalg.eigvalsh(0.5 * (L + L.T))
    values = np.linalg.eigvals(L)
    order = np.lexsort((values.imag, values.real))
    values = values[order]
    if np.abs(values.imag).max() <= 1e-12:
        return values.real
    return values


def lax_rhs(
    R: REndomorphism,
    H: PolynomialObservable,
    L: AlgebraElement,
    side: Side = "plus",
    config: dict[str, Any] | None = None,
) -> AlgebraElement:
    """dL/dt = [L, M(L)] with M = m_matrix(R, H, L, side)."""
    return bracket(L, m_matrix(R, H, L, side, config))


def rk4_step(rhs: Rhs, state: np.ndarray, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step."""
    k1 = rhs(state)
    k2 = rhs(state + 0.5 * dt * k1)
    k3 = rhs(state + 0.5 * dt * k2)
    k4 = rhs(state + dt * k3)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate(
    R: REndomorphism,
    H: PolynomialObservable,
    L0: AlgebraElement,
    integrator: IntegratorConfig,
    side: Side = "plus",
    config: dict[str, Any] | None = None,
    rhs: Rhs | None = None,
    n_trace_powers: int | None = None,
) -> Trajectory:
    """Integrate the Lax equation from L0 with fixed-step RK4.

    Args:
        R: r-matrix defining M
        H: Hamiltonian generating the flow
        L0: Initial Lax matrix
        integrator: Step, end time and recording stride
        side: Which M to use (plus, minus, symmetric)
        config: Optional configuration (tolerances)
        rhs: Override for the coefficient-space right-hand side
        n_trace_powers: How many H_l to record (default N, one per eigenvalue
            minus the trace)

    Returns:
        Trajectory with the conserved ledger filled at each recorded step
    """
    algebra = L0.algebra
    dt = integrator.step
    n_steps = integrator.n_steps
    powers = n_trace_powers if n_trace_powers is not None else max(2, algebra.matrix_size - 1)

    if rhs is None:
        def rhs(coeffs: np.ndarray) -> np.ndarray:
            return lax_rhs(R, H, AlgebraElement(algebra, coeffs), side, config).coeffs

    trajectory = Trajectory(algebra)
    state = L0.coeffs.copy()
    trajectory.record(0.0, state, powers)

    t = 0.0
    for step in range(1, n_steps + 1):
        t_next = integrator.time_at(step)
        state = rk4_step(rhs, state, t_next - t)
        t = t_next
        if step % integrator.record_every == 0 or step == n_steps:
            trajectory.record(t, state, powers)

    logger.info(
        f"Integrated {H.name} on {algebra.name}: {n_steps} steps of {dt:g}, "
        f"{len(trajectory)} records"
    )
    return trajectory


def conservation_report(
    trajectory: Trajectory, config: dict[str, Any] | None = None
) -> ConservationReport:
    """Max |value(t) - value(0)| for every H_l and every sorted eigenvalue.

    Raises:
        EmptyTrajectory: If nothing was recorded
    """
    if len(trajectory) == 0:
        raise EmptyTrajectory("conservation_report needs at least one recorded state")

    drifts: dict[str, float] = {}
    for name, values in trajectory.conserved.items():
        series = np.asarray(values)
        drifts[name] = float(np.abs(series - series[0]).max())

    spectra = np.asarray(trajectory.eigenvalues)
    for index in range(spectra.shape[1]):
        column = spectra[:, index]
        drifts[f"eig_{index + 1}"] = float(np.abs(column - column[0]).max())

    report = ConservationReport(drifts=drifts, tolerance=tolerance(config, "conservation"))
    if not report.passed:
        logger.warning(f"Conservation failures {report.failures()} (max drift {report.max_drift:.3e})")
    return report


def random_tridiagonal(algebra: LieAlgebra, rng: np.random.Generator) -> AlgebraElement:
    """Random symmetric tridiagonal traceless state in the algebra."""
    n = algebra.matrix_size
    a = rng.normal(size=n)
    a -= a.mean()
    b = rng.normal(size=n - 1)
    L = np.diag(a) + np.diag(b, 1) + np.diag(b, -1)
    return algebra.element_from_matrix(L)


def involution_scan(
    R: REndomorphism,
    hamiltonians: Sequence[PolynomialObservable],
    samples: int,
    rng: np.random.Generator | None = None,
    config: dict[str, Any] | None = None,
) -> dict[str, Any]:
    """Max |{H_i, H_j}_R| over all pairs at random tridiagonal states.

    Returns:
        Dictionary with the maximum, the worst pair and per-pair maxima
    """
    if len(hamiltonians) < 2:
        raise ValueError("involution_scan needs at least two Hamiltonians")
    if samples < 1:
        raise ValueError(f"involution_scan needs at least one sample, got {samples}")
    rng = rng if rng is not None else np.random.default_rng(0)

    states = [random_tridiagonal(R.algebra, rng) for _ in range(samples)]
    pairs: dict[str, float] = {}
    for i, phi in enumerate(hamiltonians):
        for j in range(i + 1, len(hamiltonians)):
            psi = hamiltonians[j]
            value = max(abs(lie_poisson_R(R, phi, psi, L, config)) for L in states)
            pairs[f"{phi.name},{psi.name}"] = value

    worst = max(pairs, key=pairs.get)
    logger.info(f"Involution scan on {R.algebra.name}: max {pairs[worst]:.3e} for {{{worst}}}")
    return {"max": pairs[worst], "worst_pair": worst, "pairs": pairs, "samples": samples}
