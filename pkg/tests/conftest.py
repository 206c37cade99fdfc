import numpy as np
import pytest

from laguerre_schrodinger import (
    PotentialProfile,
    build_particular_basis,
    coefficients_recurrent,
    make_uniform_grid,
)


@pytest.fixture(scope="session")
def grid():
    return make_uniform_grid(1.0, 5001)


@pytest.fixture(scope="session")
def small_grid():
    return make_uniform_grid(1.0, 1001)


@pytest.fixture(scope="session")
def basis_one(grid):
    return build_particular_basis(PotentialProfile.constant(grid, 1.0))


@pytest.fixture(scope="session")
def basis_zero(grid):
    return build_particular_basis(PotentialProfile.constant(grid, 0.0))


@pytest.fixture(scope="session")
def table_one(basis_one):
    """q = 1, a_0..a_200 on the 5001-node grid."""
    return coefficients_recurrent(basis_one, 200)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240611)
