"""Unit tests for Lie dialgebras, the mCYBE scan and the dialgebra double."""

import numpy as np
import pytest

from rmatrix.algebra.dialgebra import (
    adjoint,
    bracket_R,
    build_double,
    fit_mcybe_constant,
    homomorphism_residual,
    is_skew_symmetric,
    jacobi_residual_R,
    lie_poisson_R,
    m_matrix,
    mcybe_residual,
    r_from_map,
    r_from_matrix,
    r_from_split,
)
from rmatrix.algebra.liealg import PolynomialObservable, bracket, gradient
from rmatrix.errors import (
    AlgebraMismatch,
    DimensionMismatch,
    NotClosed,
    NotComplementary,
    NotMCYBE,
    NotSubalgebra,
    Singular,
)


def _split_parts(R, X):
    plus, minus = R.split
    xp = np.zeros_like(X.coeffs)
    xm = np.zeros_like(X.coeffs)
    xp[list(plus)] = X.coeffs[list(plus)]
    xm[list(minus)] = X.coeffs[list(minus)]
    return X.algebra.element(xp), X.algebra.element(xm)


def _triangular_map(m):
    return np.triu(m, 1) - np.tril(m, -1)


@pytest.mark.unit
class TestConstruction:
    """Tests for building R from splits, matrices and maps."""

    def test_split_is_diagonal(self, sl3_split_R):
        """R = +1 on g_plus and -1 on g_minus."""
        np.testing.assert_array_equal(np.diag(sl3_split_R.matrix), [1, 1, 1, -1, -1, -1, -1, -1])
        assert sl3_split_R.to_dict() == {"kind": "split", "g_plus": [0, 1, 2], "g_minus": [3, 4, 5, 6, 7]}

    def test_split_overlap(self, sl2_algebra):
        """Overlapping index sets are rejected."""
        with pytest.raises(NotComplementary, match="overlap"):
            r_from_split(sl2_algebra, [0, 1], [1, 2])

    def test_split_missing_index(self, sl2_algebra):
        """Index sets must cover the basis."""
        with pytest.raises(NotComplementary, match="partition"):
            r_from_split(sl2_algebra, [0], [1])

    def test_split_not_subalgebra(self, sl2_algebra):
        """span{X, Y} is not closed since [X, Y] = H."""
        with pytest.raises(NotSubalgebra, match="g_plus"):
            r_from_split(sl2_algebra, [1, 2], [0])

    def test_from_map(self, sl2_algebra):
        """Strict upper minus strict lower on (H, X, Y) is diag(0, 1, -1)."""
        R = r_from_map(sl2_algebra, _triangular_map)
        np.testing.assert_allclose(R.matrix, np.diag([0.0, 1.0, -1.0]), atol=1e-14)

    def test_from_map_leaves_algebra(self, sl2_algebra):
        """A map into the identity is outside sl(2)."""
        with pytest.raises(NotClosed):
            r_from_map(sl2_algebra, lambda m: np.eye(2))

    def test_from_matrix_shape(self, sl2_algebra):
        """Explicit matrices must be dim x dim."""
        with pytest.raises(DimensionMismatch):
            r_from_matrix(sl2_algebra, np.eye(2))

    def test_foreign_element(self, sl2_algebra, affine_algebra):
        """R refuses elements of another algebra."""
        R = r_from_matrix(sl2_algebra, np.eye(3))
        with pytest.raises(AlgebraMismatch):
            R(affine_algebra.basis_element(0))

    def test_plus_minus(self, sl3_split_R):
        """R_+ - R_- = I."""
        np.testing.assert_allclose(sl3_split_R.plus - sl3_split_R.minus, np.eye(8))


@pytest.mark.unit
class TestAdjoint:
    """Tests for the trace-form adjoint."""

    def test_cartan_is_skew(self, sl2_algebra):
        """diag(0, 1, -1) on (H, X, Y) is skew for the trace form."""
        R = r_from_matrix(sl2_algebra, np.diag([0.0, 1.0, -1.0]))
        np.testing.assert_allclose(adjoint(R).matrix, -R.matrix, atol=1e-14)
        assert is_skew_symmetric(R)

    def test_identity_not_skew(self, sl2_algebra):
        """I* = I."""
        assert not is_skew_symmetric(r_from_matrix(sl2_algebra, np.eye(3)))

    def test_degenerate_form(self, affine_algebra):
        """No adjoint without a nondegenerate trace form."""
        with pytest.raises(Singular):
            adjoint(r_from_matrix(affine_algebra, np.eye(2)))


@pytest.mark.unit
class TestRBracket:
    """Tests for the R-bracket and its Lie-Poisson structure."""

    def test_split_bracket(self, sl3_split_R, sl3_split_algebra, rng):
        """[X, Y]_R = [X+, Y+] - [X-, Y-] for a split."""
        X = sl3_split_algebra.element(rng.normal(size=8))
        Y = sl3_split_algebra.element(rng.normal(size=8))
        xp, xm = _split_parts(sl3_split_R, X)
        yp, ym = _split_parts(sl3_split_R, Y)
        expected = bracket(xp, yp) - bracket(xm, ym)
        assert bracket_R(sl3_split_R, X, Y).allclose(expected, atol=1e-12)

    def test_identity_bracket(self, sl2_algebra, rng):
        """R = I reproduces the original bracket."""
        R = r_from_matrix(sl2_algebra, np.eye(3))
        X = sl2_algebra.element(rng.normal(size=3))
        Y = sl2_algebra.element(rng.normal(size=3))
        assert bracket_R(R, X, Y).allclose(bracket(X, Y), atol=1e-12)

    def test_lie_poisson_R_antisymmetric(self, sl3_split_R, sl3_split_algebra, rng):
        """{phi, psi}_R = -{psi, phi}_R."""
        L = sl3_split_algebra.element(rng.normal(size=8))
        phi = PolynomialObservable.linear(sl3_split_algebra.element(rng.normal(size=8)))
        psi = PolynomialObservable.trace_power(2)
        forward = lie_poisson_R(sl3_split_R, phi, psi, L)
        assert forward == pytest.approx(-lie_poisson_R(sl3_split_R, psi, phi, L), abs=1e-10)

    def test_m_matrix_sides(self, sl3_split_R, sl3_split_algebra, rng):
        """M_+ = P_+ grad H and M_- = -P_- grad H for a split R."""
        L = sl3_split_algebra.element(rng.normal(size=8))
        H = PolynomialObservable.trace_power(1)
        grad = gradient(H, L)
        gp, gm = _split_parts(sl3_split_R, grad)
        assert m_matrix(sl3_split_R, H, L, "plus").allclose(gp, atol=1e-12)
        assert m_matrix(sl3_split_R, H, L, "minus").allclose(-gm, atol=1e-12)
        symmetric = m_matrix(sl3_split_R, H, L, "symmetric")
        assert symmetric.allclose(0.5 * (gp - gm), atol=1e-12)

    def test_unknown_side(self, sl3_split_R):
        """Only plus, minus and symmetric are accepted."""
        with pytest.raises(ValueError):
            sl3_split_R.side_matrix("left")


@pytest.mark.unit
class TestMCYBE:
    """Tests for the modified classical Yang-Baxter scan."""

    def test_split_satisfies_c_one(self, sl3_split_R):
        """Complementary subalgebras give mCYBE with c = 1."""
        assert mcybe_residual(sl3_split_R, 1.0).max_residual <= 1e-10

    def test_split_fails_c_zero(self, sl3_split_R):
        """The same R is not a classical YB solution."""
        report = mcybe_residual(sl3_split_R, 0.0)
        assert not report.passed(1e-10)
        assert report.to_dict()["c"] == 0.0

    def test_identity_residual(self, sl2_algebra):
        """For R = I the residual is (c - 1)[X, Y]."""
        R = r_from_matrix(sl2_algebra, np.eye(3))
        assert mcybe_residual(R, 1.0).max_residual <= 1e-14
        # [X, Y] = H has Frobenius norm sqrt(2), [H, X] = 2X norm 2
        assert mcybe_residual(R, 3.0).max_residual == pytest.approx(4.0)

    def test_cartan_c_one(self, sl2_algebra):
        """Strictly upper minus strictly lower on sl(2) satisfies c = 1."""
        R = r_from_map(sl2_algebra, _triangular_map)
        assert mcybe_residual(R, 1.0).max_residual <= 1e-12

    def test_fit_scales_quadratically(self, sl2_algebra):
        """R = 2I fits c = 4."""
        report = fit_mcybe_constant(r_from_matrix(sl2_algebra, 2.0 * np.eye(3)))
        assert report.c == pytest.approx(4.0)
        assert report.max_residual <= 1e-12

    def test_fit_zero_endomorphism(self, sl2_algebra):
        """R = 0 solves the equation only with c = 0."""
        report = fit_mcybe_constant(r_from_matrix(sl2_algebra, np.zeros((3, 3))))
        assert report.c == pytest.approx(0.0, abs=1e-14)

    def test_jacobi_residual_R_zero_for_solution(self, sl3_split_R):
        """A solution of mCYBE makes [.,.]_R a Lie bracket."""
        assert jacobi_residual_R(sl3_split_R) <= 1e-10

    def test_jacobi_residual_R_is_four_jacobiators(self, sl2_algebra, rng):
        """The cyclic residual is four times the Jacobiator of [.,.]_R."""
        R = r_from_matrix(sl2_algebra, rng.normal(size=(3, 3)))
        worst = 0.0
        for i in range(3):
            for j in range(3):
                for k in range(3):
                    X, Y, Z = (sl2_algebra.basis_element(n) for n in (i, j, k))
                    jac = (
                        bracket_R(R, bracket_R(R, X, Y), Z)
                        + bracket_R(R, bracket_R(R, Y, Z), X)
                        + bracket_R(R, bracket_R(R, Z, X), Y)
                    )
                    worst = max(worst, jac.norm())
        assert worst > 1e-6
        assert jacobi_residual_R(R) == pytest.approx(4.0 * worst, rel=1e-10)

    @pytest.mark.parametrize("side", ["plus", "minus"])
    def test_homomorphisms(self, sl3_split_R, side):
        """R_+ and R_- are homomorphisms from g_R when c = 1."""
        assert homomorphism_residual(sl3_split_R, side) <= 1e-10


@pytest.mark.unit
class TestDouble:
    """Tests for the dialgebra double."""

    def test_projections(self, sl3_split_algebra, sl3_split_R):
        """P_gR and P_delta are complementary idempotents."""
        double = build_double(sl3_split_algebra, sl3_split_R)
        assert double.ambient.dim == 16
        for name, value in double.projection_residuals().items():
            assert value <= 1e-12, name

    def test_r_double_solves_mcybe(self, sl2_algebra):
        """The split r-matrix of the double satisfies c = 1."""
        R = r_from_map(sl2_algebra, _triangular_map)
        double = build_double(sl2_algebra, R)
        assert mcybe_residual(double.r_double(), 1.0).max_residual <= 1e-10

    def test_embed_components(self, sl2_algebra, rng):
        """embed and components are inverse."""
        double = build_double(sl2_algebra, r_from_matrix(sl2_algebra, np.eye(3)))
        X = sl2_algebra.element(rng.normal(size=3))
        Y = sl2_algebra.element(rng.normal(size=3))
        first, second = double.components(double.embed(X, Y))
        assert first.allclose(X) and second.allclose(Y)

    def test_rejects_non_solution(self, sl2_algebra):
        """R = 2I fails mCYBE with c = 1."""
        with pytest.raises(NotMCYBE):
            build_double(sl2_algebra, r_from_matrix(sl2_algebra, 2.0 * np.eye(3)))

    def test_threshold_from_config(self, sl2_algebra, default_config):
        """The acceptance threshold is the configured mcybe tolerance."""
        R = r_from_matrix(sl2_algebra, (1.0 + 1e-6) * np.eye(3))
        with pytest.raises(NotMCYBE):
            build_double(sl2_algebra, R)
        default_config["tolerances"]["mcybe"] = 1e-5
        assert build_double(sl2_algebra, R, default_config).ambient.dim == 6

    def test_rejects_foreign_R(self, sl2_algebra, sl3_split_R):
        """R must act on the algebra being doubled."""
        with pytest.raises(AlgebraMismatch):
            build_double(sl2_algebra, sl3_split_R)
