import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laguerre_schrodinger import (
    DomainError,
    GridError,
    PotentialProfile,
    build_formal_powers,
    build_particular_basis,
    coefficients_direct,
    coefficients_recurrent,
    make_uniform_grid,
)

POTENTIALS = {
    "one": lambda t: 1.0 + 0 * t,
    "x": lambda t: t,
    "x2_sin3x": lambda t: t**2 + np.sin(3 * t),
}


def a1_closed_form(x):
    return (np.cosh(x) - 1) * (1 - x) + np.sinh(x) - x


def test_direct_a0_and_a1(basis_one, grid):
    fp = build_formal_powers(basis_one, 5)
    table = coefficients_direct(fp, 5)
    x = grid.nodes
    assert np.max(np.abs(table[0].values - (basis_one.f0.values - 1))) <= 1e-14
    assert np.max(np.abs(table[1].values - a1_closed_form(x))) <= 1e-13


def test_recurrent_a0_and_a1(table_one, grid):
    x = grid.nodes
    assert np.max(np.abs(table_one[0].values - (np.cosh(x) - 1))) <= 1e-13
    assert np.max(np.abs(table_one[1].values - a1_closed_form(x))) <= 1e-9


def test_q_zero_gives_zero(basis_zero):
    rec = coefficients_recurrent(basis_zero, 50)
    assert np.all(rec.values == 0)
    direct = coefficients_direct(build_formal_powers(basis_zero, 20), 20)
    assert np.max(np.abs(direct.values)) <= 1e-12


@pytest.mark.parametrize("name", sorted(POTENTIALS))
def test_direct_matches_recurrent(grid, name):
    basis = build_particular_basis(PotentialProfile.from_callable(grid, POTENTIALS[name]))
    direct = coefficients_direct(build_formal_powers(basis, 20), 20)
    rec = coefficients_recurrent(basis, 20)
    assert np.max(np.abs(direct.values - rec.values)) <= 1e-8


def test_vanishes_at_origin(table_one):
    assert np.all(table_one.values[:, 0] == 0)


def test_direct_order_cap(basis_one):
    fp = build_formal_powers(basis_one, 31)
    with pytest.raises(DomainError):
        coefficients_direct(fp, 31)


def test_stride_and_diagnostics_only(basis_one, table_one):
    strided = coefficients_recurrent(basis_one, 200, stride=10)
    assert strided.grid.m == 501
    np.testing.assert_array_equal(strided.values, table_one.values[:, ::10])
    np.testing.assert_array_equal(strided.decay, table_one.decay)
    np.testing.assert_array_equal(strided.residual, table_one.residual)
    bare = coefficients_recurrent(basis_one, 200, stride=None)
    assert not bare.stored
    np.testing.assert_array_equal(bare.residual, table_one.residual)
    with pytest.raises(DomainError):
        bare[0]


def test_stride_must_divide(basis_one):
    with pytest.raises(GridError):
        coefficients_recurrent(basis_one, 3, stride=7)


def test_column_interpolates(table_one, grid):
    col = table_one.column(0.5)
    np.testing.assert_array_equal(col, table_one.values[:, 2500])
    off = table_one.column(0.50001)
    assert abs(off[0] - (np.cosh(0.50001) - 1)) <= 1e-13
    with pytest.raises(DomainError):
        table_one.column(1.5)


@settings(max_examples=10, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_linear_potential_direct_vs_recurrent(c0, c1):
    g = make_uniform_grid(1.0, 401)
    basis = build_particular_basis(PotentialProfile.from_callable(g, lambda t: c0 + c1 * t))
    direct = coefficients_direct(build_formal_powers(basis, 12), 12)
    rec = coefficients_recurrent(basis, 12)
    assert np.max(np.abs(direct.values - rec.values)) <= 1e-9
