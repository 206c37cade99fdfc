import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laguerre_schrodinger import (
    ConvergenceError,
    DomainError,
    PotentialProfile,
    VanishingDenominatorError,
    build_formal_powers,
    build_particular_basis,
    make_uniform_grid,
    recursive_integrals,
    rk_solution,
    spps_solution,
    spps_tail,
)
from laguerre_schrodinger.oracles import constant_q_values


def test_basis_q_zero(basis_zero, grid):
    np.testing.assert_allclose(basis_zero.f0.values, 1.0, atol=0)
    np.testing.assert_allclose(basis_zero.f1.values, grid.nodes, atol=0)
    assert basis_zero.fprime0 == 1j


def test_basis_q_one(basis_one, grid):
    x = grid.nodes
    assert np.max(np.abs(basis_one.f0.values - np.cosh(x))) <= 1e-13
    assert np.max(np.abs(basis_one.f1.values - np.sinh(x))) <= 1e-13
    assert np.max(np.abs(basis_one.f.values - (np.cosh(x) + 1j * np.sinh(x)))) <= 1e-13
    assert np.max(np.abs(basis_one.f0_prime.values - np.sinh(x))) <= 1e-13
    assert np.max(np.abs(basis_one.f1_prime.values - np.cosh(x))) <= 1e-13


def test_basis_q_x_against_rk(grid):
    q = PotentialProfile.from_callable(grid, lambda t: t)
    basis = build_particular_basis(q)
    # f0 solves the equation at omega = 0 with f0(0) = 1, f0'(0) = 0
    ref = rk_solution(q, 0.0, tol=1e-13)
    assert np.max(np.abs(basis.f0.values - ref.values.values)) <= 1e-10


@pytest.mark.parametrize("expr", [lambda t: t, lambda t: t**2 + np.sin(3 * t), lambda t: -30 + 0 * t])
def test_wronskian_is_one(grid, expr):
    basis = build_particular_basis(PotentialProfile.from_callable(grid, expr))
    assert np.max(np.abs(basis.wronskian() - 1.0)) <= 1e-12


def test_picard_cap(grid):
    q = PotentialProfile.constant(grid, 400.0)
    with pytest.raises(ConvergenceError):
        build_particular_basis(q, max_iter=5)


def test_recursive_integrals_q_zero(basis_zero, grid):
    for variant in ("X", "Xtilde"):
        seq = recursive_integrals(basis_zero.f0, 8, variant)
        for n, X in enumerate(seq):
            np.testing.assert_allclose(X.values, grid.nodes**n, rtol=0, atol=1e-14)


def test_recursive_integrals_cosh(basis_one, grid):
    X = recursive_integrals(basis_one.f0, 2, "X")
    x = grid.nodes
    assert np.max(np.abs(X[1].values - np.tanh(x))) <= 1e-13
    assert np.max(np.abs(X[2].values - np.sinh(x) ** 2)) <= 1e-13
    Xt = recursive_integrals(basis_one.f0, 1, "Xtilde")
    assert np.max(np.abs(Xt[1].values - (np.sinh(x) * np.cosh(x) + x) / 2)) <= 1e-13


def test_recursive_integrals_bad_variant(basis_one):
    with pytest.raises(ValueError):
        recursive_integrals(basis_one.f0, 2, "Y")


def test_formal_powers_q_zero(basis_zero, grid):
    fp = build_formal_powers(basis_zero, 12)
    for k in range(13):
        np.testing.assert_allclose(fp[k].values, grid.nodes**k, rtol=0, atol=1e-13)


def test_formal_powers_q_one(basis_one, grid):
    fp = build_formal_powers(basis_one, 3)
    x = grid.nodes
    assert np.max(np.abs(fp[0].values - np.cosh(x))) <= 1e-13
    assert np.max(np.abs(fp[1].values - np.sinh(x))) <= 1e-13


def test_both_constructions_agree(grid):
    basis = build_particular_basis(PotentialProfile.from_callable(grid, lambda t: t**2 + np.sin(3 * t)))
    a = build_formal_powers(basis, 20, via="f").values()
    b = build_formal_powers(basis, 20, via="f0").values()
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(b))


def test_vanishing_f0_needs_f_route():
    # q = -25: f0 = cos 5x vanishes at the right end of [0, pi/10]
    g = make_uniform_grid(np.pi / 10, 2001)
    basis = build_particular_basis(PotentialProfile.constant(g, -25.0))
    with pytest.raises(VanishingDenominatorError):
        build_formal_powers(basis, 10, via="f0")
    fp = build_formal_powers(basis, 40, via="f")
    for omega in (0.5, 2.0):
        u = spps_solution(fp, omega, 40).values
        assert np.max(np.abs(u - constant_q_values(-25.0, omega, g.nodes))) <= 1e-11


def test_spps_omega_zero(basis_one):
    fp = build_formal_powers(basis_one, 10)
    for M in (0, 3, 10):
        u = spps_solution(fp, 0.0, M).values
        assert np.max(np.abs(u - basis_one.f0.values)) <= 1e-14


def test_spps_q_zero(basis_zero, grid):
    fp = build_formal_powers(basis_zero, 40)
    u = spps_solution(fp, 2.0, 40).values
    assert np.max(np.abs(u - np.exp(-2j * grid.nodes))) <= 1e-12


def test_spps_q_one(basis_one, grid):
    fp = build_formal_powers(basis_one, 60)
    u = spps_solution(fp, 3.0, 60).values
    assert np.max(np.abs(u - constant_q_values(1.0, 3.0, grid.nodes))) <= 1e-10


def test_spps_truncation_too_large(basis_one):
    fp = build_formal_powers(basis_one, 5)
    with pytest.raises(DomainError):
        spps_solution(fp, 1.0, 6)


@settings(max_examples=15, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_spps_initial_data(re, im):
    # u(0) = 1 and u'(0) = -i omega for every omega
    g = make_uniform_grid(1.0, 201)
    basis = build_particular_basis(PotentialProfile.from_callable(g, lambda t: t))
    fp = build_formal_powers(basis, 40)
    omega = complex(re, im)
    u = spps_solution(fp, omega, 40).values
    assert abs(u[0] - 1) <= 1e-14
    deriv = np.polynomial.polynomial.polyfit(g.nodes[:9], u[:9], 8)[1]
    assert abs(deriv + 1j * omega) <= 1e-8


def test_spps_tail(basis_zero):
    fp = build_formal_powers(basis_zero, 30)
    # q = 0: phi_M = x^M, so the last term is |omega|^M / M! at x = 1
    assert spps_tail(fp, 2.0, 10) == pytest.approx(2.0**10 / 3628800, rel=1e-12)
    assert spps_tail(fp, 2.0, 30) < 1e-20
