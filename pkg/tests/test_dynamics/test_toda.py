"""Unit tests for the open, Cartan and periodic Toda constructions."""

import numpy as np
import pytest

from rmatrix.algebra.dialgebra import is_skew_symmetric, mcybe_residual
from rmatrix.algebra.liealg import PolynomialObservable
from rmatrix.dynamics.factorization import propagate
from rmatrix.dynamics.lax_flows import IntegratorConfig, conservation_report, lax_rhs
from rmatrix.dynamics.toda import (
    CartanCoordinates,
    ShiftLattice,
    TodaChain,
    bm_band_matrix,
    bm_dense_rhs,
    bm_from_state,
    bm_integrate,
    bm_lax_matrix,
    bm_rhs,
    bm_state,
    bm_trace_drift,
    bm_trace_powers,
    cartan_hamiltonian,
    cartan_orbit_lax,
    cartan_r_matrix,
    cartan_R_action,
    cartan_to_flaschka,
    flaschka_from_lax,
    lambda_matrix,
    lax_from_flaschka,
    open_toda_flow,
    open_toda_r_matrix,
    shift_matrix,
    subalgebra_admissibility,
    toda_algebra,
    toda_rhs,
)
from rmatrix.errors import BadPeriod, BadSize, LengthMismatch, NonPositiveEta, RMatrixError

H1 = PolynomialObservable.trace_power(1)


def _random_chain(rng, N):
    a = rng.normal(size=N + 1)
    return TodaChain(a - a.mean(), rng.uniform(0.3, 1.2, size=N))


def _random_coordinates(rng, N):
    eta = np.exp(rng.normal(scale=0.3, size=N + 1))
    eta /= np.prod(eta) ** (1.0 / (N + 1))
    return CartanCoordinates(
        eta,
        np.triu(rng.normal(size=(N + 1, N + 1)), 1),
        np.tril(rng.normal(size=(N + 1, N + 1)), -1),
    )


@pytest.mark.unit
class TestTodaChain:
    """Tests for Flaschka states and the Lax matrix."""

    def test_lengths(self):
        """a has one more entry than b."""
        with pytest.raises(LengthMismatch):
            TodaChain([0.0, 0.0], [1.0, 1.0])

    def test_size(self):
        """At least one off-diagonal entry is needed."""
        with pytest.raises(BadSize):
            TodaChain([0.0], [])
        with pytest.raises(BadSize):
            toda_algebra(0)

    def test_lax_round_trip(self, rng):
        """Flaschka variables survive L and back."""
        chain = _random_chain(rng, 3)
        back = flaschka_from_lax(lax_from_flaschka(chain))
        np.testing.assert_allclose(back.a, chain.a, atol=1e-12)
        np.testing.assert_allclose(back.b, chain.b, atol=1e-12)

    def test_lambda_spectrum(self):
        """Lambda for N = 2 has eigenvalues -sqrt(2), 0, sqrt(2)."""
        L = lambda_matrix(2).matrix
        np.testing.assert_allclose(np.linalg.eigvalsh(L), [-np.sqrt(2.0), 0.0, np.sqrt(2.0)], atol=1e-12)

    def test_algebra_size_checked(self, sl2_algebra):
        """The algebra must have matrix size N + 1."""
        with pytest.raises(BadSize):
            lambda_matrix(2, sl2_algebra)


@pytest.mark.unit
class TestOpenToda:
    """Tests for the open chain."""

    def test_r_matrix_is_split(self):
        """R = 2K - X equals the split R on the adapted basis."""
        algebra = toda_algebra(2)
        R = open_toda_r_matrix(algebra)
        np.testing.assert_allclose(R.matrix, np.diag([1, 1, 1, -1, -1, -1, -1, -1]), atol=1e-12)
        assert mcybe_residual(R, 1.0).max_residual <= 1e-10

    @pytest.mark.parametrize("N", [1, 2, 3, 4])
    def test_lax_equation_is_flaschka(self, rng, N):
        """[L, R_+ grad H1] reproduces the Flaschka equations on 100 random chains."""
        algebra = toda_algebra(N)
        R = open_toda_r_matrix(algebra)
        for _ in range(100):
            chain = _random_chain(rng, N)
            rhs = flaschka_from_lax(lax_rhs(R, H1, lax_from_flaschka(chain, algebra)))
            da, db = toda_rhs(chain)
            np.testing.assert_allclose(rhs.a, da, atol=1e-12)
            np.testing.assert_allclose(rhs.b, db, atol=1e-12)

    def test_sum_a_constant(self, rng):
        """sum da = 0."""
        da, _ = toda_rhs(_random_chain(rng, 5))
        assert abs(da.sum()) <= 1e-12

    def test_flow_conserves(self, rng):
        """RK4 run keeps the spectrum and the tridiagonal shape."""
        chain = _random_chain(rng, 3)
        trajectory = open_toda_flow(chain, IntegratorConfig(step=1e-3, t_end=1.0, record_every=100))
        assert conservation_report(trajectory).passed
        final = trajectory.final
        np.testing.assert_allclose(np.triu(final, 2), 0.0, atol=1e-10)
        np.testing.assert_allclose(final, final.T, atol=1e-10)


@pytest.mark.unit
class TestCartanToda:
    """Tests for the n_+ + h + n_- construction."""

    def test_coordinate_validation(self):
        """eta must be positive with unit product and omega square."""
        square = np.zeros((2, 2))
        with pytest.raises(BadSize):
            CartanCoordinates([1.0], np.zeros((1, 1)), np.zeros((1, 1)))
        with pytest.raises(LengthMismatch):
            CartanCoordinates([1.0, 1.0], np.zeros((3, 3)), square)
        with pytest.raises(NonPositiveEta):
            CartanCoordinates([-1.0, -1.0], square, square)
        with pytest.raises(RMatrixError, match="det Y"):
            CartanCoordinates([2.0, 1.0], square, square)

    def test_omega_normalised(self):
        """Entries on the wrong side of the diagonal are discarded."""
        coords = CartanCoordinates([1.0, 1.0], np.ones((2, 2)), np.ones((2, 2)))
        np.testing.assert_array_equal(coords.W_plus, [[1.0, 1.0], [0.0, 1.0]])
        np.testing.assert_array_equal(coords.W_minus, [[1.0, 0.0], [1.0, 1.0]])

    def test_uniform_eta(self):
        """eta = 1, omega = 0 gives a = 0, b = 1."""
        coords = CartanCoordinates(np.ones(3), np.zeros((3, 3)), np.zeros((3, 3)))
        chain = cartan_to_flaschka(coords)
        np.testing.assert_allclose(chain.a, 0.0)
        np.testing.assert_allclose(chain.b, 1.0)
        np.testing.assert_allclose(cartan_orbit_lax(coords).matrix, lambda_matrix(2).matrix, atol=1e-14)

    def test_two_site_values(self):
        """eta = (2, 1/2) gives b = 1/4."""
        coords = CartanCoordinates([2.0, 0.5], np.zeros((2, 2)), np.zeros((2, 2)))
        assert cartan_to_flaschka(coords).b[0] == pytest.approx(0.25)
        assert flaschka_from_lax(cartan_orbit_lax(coords)).b[0] == pytest.approx(0.25)

    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_formula_matches_orbit(self, rng, N):
        """Closed form agrees with the coadjoint orbit evaluation."""
        coords = _random_coordinates(rng, N)
        closed = cartan_to_flaschka(coords)
        orbit = flaschka_from_lax(cartan_orbit_lax(coords))
        np.testing.assert_allclose(orbit.a, closed.a, atol=1e-10)
        np.testing.assert_allclose(orbit.b, closed.b, atol=1e-10)
        assert abs(closed.a.sum()) <= 1e-12

    def test_r_matrix(self):
        """The Cartan R is skew and solves mCYBE with c = 1."""
        R = cartan_r_matrix(toda_algebra(2))
        assert mcybe_residual(R, 1.0).max_residual <= 1e-10
        assert is_skew_symmetric(R)

    def test_R_action_sides(self):
        """R_+ keeps n_+ and half of h, R_- keeps minus n_- and half of h."""
        algebra = toda_algebra(1)
        X = algebra.element_from_matrix(np.array([[1.0, 2.0], [3.0, -1.0]]))
        np.testing.assert_allclose(
            cartan_R_action(X, "plus").matrix, [[0.5, 2.0], [0.0, -0.5]], atol=1e-12
        )
        np.testing.assert_allclose(
            cartan_R_action(X, "minus").matrix, [[-0.5, 0.0], [-3.0, 0.5]], atol=1e-12
        )

    @pytest.mark.parametrize("N", [1, 2, 3])
    def test_cartan_rhs_is_flaschka(self, rng, N):
        """The Cartan Lax equation at a Cartan state gives the Toda equations."""
        algebra = toda_algebra(N)
        chain = cartan_to_flaschka(_random_coordinates(rng, N))
        L = lax_from_flaschka(chain, algebra)
        rhs = flaschka_from_lax(lax_rhs(cartan_r_matrix(algebra), cartan_hamiltonian(), L))
        da, db = toda_rhs(chain)
        np.testing.assert_allclose(rhs.a, da, atol=1e-12)
        np.testing.assert_allclose(rhs.b, db, atol=1e-12)

    @pytest.mark.parametrize("N", [1, 3])
    def test_same_rhs_as_open(self, rng, N):
        """The Cartan and open right-hand sides agree without a sign flip."""
        algebra = toda_algebra(N)
        L = lax_from_flaschka(_random_chain(rng, N), algebra)
        cartan = lax_rhs(cartan_r_matrix(algebra), cartan_hamiltonian(), L)
        open_flow = lax_rhs(open_toda_r_matrix(algebra), H1, L)
        assert cartan.allclose(open_flow, atol=1e-12)

    def test_same_endpoint_as_open(self, rng):
        """LDU solve of the Cartan flow and QR solve of the open flow meet at the same t."""
        algebra = toda_algebra(2)
        L = lax_from_flaschka(cartan_to_flaschka(_random_coordinates(rng, 2)), algebra)
        cartan_end = propagate(L, cartan_hamiltonian(), 0.7, "ldu")
        open_end = propagate(L, H1, 0.7, "qr")
        np.testing.assert_allclose(cartan_end.L.matrix, open_end.L.matrix, atol=1e-9)

    def test_hamiltonian_name(self):
        """-tr(L^2) is recorded as -2*H1."""
        assert cartan_hamiltonian().name == "-2*H1"


@pytest.mark.unit
class TestPeriodicLattice:
    """Tests for the shift-operator lattice."""

    def test_validation(self):
        """Two sites and equal band lengths are required."""
        with pytest.raises(BadPeriod):
            ShiftLattice([1.0], [0.0])
        with pytest.raises(LengthMismatch):
            ShiftLattice([1.0, 1.0, 1.0], [0.0, 0.0])
        with pytest.raises(LengthMismatch):
            bm_from_state(np.zeros(5))

    def test_shift_matrix(self):
        """S e_(i+1) = e_i and S^-1 is its transpose."""
        S = shift_matrix(3)
        np.testing.assert_array_equal(S, [[0, 1, 0], [0, 0, 1], [1, 0, 0]])
        np.testing.assert_array_equal(shift_matrix(3, -1), S.T)

    def test_lax_matrix_spectrum(self):
        """a = 1, b = 0 on three sites has eigenvalues 2, -1, -1."""
        L = bm_lax_matrix(ShiftLattice(np.ones(3), np.zeros(3)))
        np.testing.assert_allclose(np.sort(np.linalg.eigvals(L).real), [-1.0, -1.0, 2.0], atol=1e-10)

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_band_rhs_matches_dense(self, rng, n):
        """The band equations equal [(L)_>=0, L]."""
        lattice = ShiftLattice(rng.uniform(0.5, 1.5, size=n), rng.normal(size=n))
        np.testing.assert_allclose(bm_band_matrix(*bm_rhs(lattice)), bm_dense_rhs(lattice), atol=1e-12)

    def test_sum_b_constant(self, rng):
        """tr L = sum b is conserved by the band equations."""
        _, db = bm_rhs(ShiftLattice(rng.uniform(size=4), rng.normal(size=4)))
        assert abs(db.sum()) <= 1e-12

    def test_state_packing(self):
        """bm_state and bm_from_state are inverse."""
        lattice = bm_from_state(bm_state([1.0, 2.0], [3.0, 4.0]))
        np.testing.assert_array_equal(lattice.a, [1.0, 2.0])
        np.testing.assert_array_equal(lattice.b, [3.0, 4.0])
        assert lattice.bands[1].tolist() == [1.0, 1.0]

    def test_trace_powers(self):
        """tr L, tr L^2, tr L^3 for a = 1, b = 0 on three sites."""
        values = bm_trace_powers(ShiftLattice(np.ones(3), np.zeros(3)))
        np.testing.assert_allclose(values, [0.0, 6.0, 6.0], atol=1e-12)

    def test_integration_conserves_traces(self, rng):
        """tr L^k stays constant along an RK4 run."""
        lattice = ShiftLattice(rng.uniform(0.5, 1.5, size=4), rng.normal(scale=0.5, size=4))
        run = bm_integrate(lattice, IntegratorConfig(step=1e-3, t_end=1.0, record_every=100))
        assert len(run.lattices) == len(run.trajectory) == 11
        drifts = bm_trace_drift(run)
        assert set(drifts) == {"tr_L1", "tr_L2", "tr_L3"}
        assert max(drifts.values()) <= 1e-8

    @pytest.mark.parametrize("k, expected", [(-1, False), (0, True), (1, True), (2, False), (5, False)])
    def test_subalgebra_admissibility(self, k, expected):
        """Only k = 0 and k = 1 split the shift algebra."""
        assert subalgebra_admissibility(k) is expected


@pytest.mark.unit
@pytest.mark.slow
class TestOpenTodaAsymptotics:
    """Long-time behaviour of the open chain."""

    def test_off_diagonal_decays(self):
        """b_j(10) is small on the standard N = 2 run and a sorts the spectrum."""
        chain = TodaChain(np.zeros(3), np.ones(2))
        trajectory = open_toda_flow(chain, IntegratorConfig(step=5e-3, t_end=10.0, record_every=500))
        final = flaschka_from_lax(trajectory.final)

        assert np.abs(final.b).max() <= 1e-2
        np.testing.assert_allclose(final.a, [np.sqrt(2.0), 0.0, -np.sqrt(2.0)], atol=1e-3)
