"""Pytest configuration and shared fixtures for rmatrix tests."""

import copy
import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from rmatrix.algebra.bialgebra import TensorR
from rmatrix.algebra.dialgebra import r_from_split
from rmatrix.algebra.standard import affine_2d, sl, sl2, skew_upper_indices
from rmatrix.utils.config_utils import DEFAULT_CONFIG


@pytest.fixture
def temp_dir():
    """Create a temporary directory for tests.

    Yields:
        Path: Temporary directory path
    """
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture
def default_config():
    """Fresh copy of the default configuration."""
    return copy.deepcopy(DEFAULT_CONFIG)


@pytest.fixture
def rng():
    """Seeded generator."""
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def sl2_algebra():
    """sl(2) with basis (H, X, Y)."""
    return sl2()


@pytest.fixture(scope="session")
def affine_algebra():
    """Two-dimensional algebra [X, Y] = X."""
    return affine_2d()


@pytest.fixture(scope="session")
def sl3_algebra():
    """sl(3) in the standard basis."""
    return sl(3)


@pytest.fixture(scope="session")
def sl3_split_algebra():
    """sl(3) in the skew plus upper triangular basis."""
    return sl(3, basis="skew-upper")


@pytest.fixture(scope="session")
def sl3_split_R(sl3_split_algebra):
    """Split R = P_skew - P_upper on sl(3)."""
    plus, minus = skew_upper_indices(3)
    return r_from_split(sl3_split_algebra, plus, minus)


@pytest.fixture
def factorisable_r(sl2_algebra):
    """r = (H (x) H + 4 X (x) Y) / 8 on sl(2)."""
    coeffs = np.zeros((3, 3))
    coeffs[0, 0] = 1.0 / 8.0
    coeffs[1, 2] = 0.5
    return TensorR(sl2_algebra, coeffs)


@pytest.fixture
def triangular_sl2_r(sl2_algebra):
    """r = X (x) H - H (x) X on sl(2)."""
    coeffs = np.zeros((3, 3))
    coeffs[1, 0] = 1.0
    coeffs[0, 1] = -1.0
    return TensorR(sl2_algebra, coeffs)


@pytest.fixture
def triangular_affine_r(affine_algebra):
    """r = X (x) Y - Y (x) X on the two-dimensional algebra."""
    return TensorR(affine_algebra, np.array([[0.0, 1.0], [-1.0, 0.0]]))


@pytest.fixture
def sample_results():
    """Run results in the shape produced by RMatrixRunner."""
    return {
        "metadata": {"command": "verify", "algebra": "sl3-split", "seed": 0, "version": "1.0.0"},
        "summary": {"passed": False, "checks_total": 2, "checks_failed": 1, "mcybe_residual": 1.5e-16},
        "checks": [
            {"name": "mcybe_residual", "value": 1.5e-16, "tolerance": 1e-10, "passed": True},
            {
                "name": "jacobi_residual_R",
                "value": 0.25,
                "tolerance": 1e-10,
                "passed": False,
                "detail": "worst basis pair (0, 3)",
            },
        ],
    }
