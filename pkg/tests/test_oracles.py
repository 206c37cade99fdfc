import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from laguerre_schrodinger import DomainError, PotentialProfile, constant_q_solution, make_uniform_grid, rk_solution
from laguerre_schrodinger.oracles import constant_q_values


@pytest.fixture(scope="module")
def g():
    return make_uniform_grid(1.0, 201)


def test_closed_form_examples(g):
    x = g.nodes
    for omega in (0.5, 3.0, 40.0):
        np.testing.assert_allclose(constant_q_solution(0.0, omega, g).values.values, np.exp(-1j * omega * x),
                                   rtol=0, atol=1e-14)
    np.testing.assert_allclose(constant_q_values(1.0, 0.0, x), np.cosh(x), rtol=1e-15)
    np.testing.assert_allclose(constant_q_values(1.0, 1.0, x), 1 - 1j * x, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.floats(-50, 50), st.floats(-3, 3), st.floats(-20, 20))
def test_closed_form_solves_equation(re, im, c):
    # second difference of u against (c - omega^2) u, plus initial data
    omega = complex(re, im)
    x = np.array([0.5 - 1e-3, 0.5, 0.5 + 1e-3])
    u = constant_q_values(c, omega, x)
    scale = max(1.0, np.max(np.abs(u)))
    lhs = (u[0] - 2 * u[1] + u[2]) / 1e-6
    # central difference error ~ h^2 |k|^4 |u| / 12
    assert abs(lhs - (c - omega**2) * u[1]) <= 1e-6 * scale * max(1.0, abs(c - omega**2)) ** 2
    assert constant_q_values(c, omega, 0.0) == 1.0


@settings(max_examples=50, deadline=None)
@given(st.floats(-30, 30), st.floats(-2, 2), st.floats(0, 1))
def test_small_k_branch_continuous(re, im, x):
    # omega^2 = c exactly hits the series branch
    omega = complex(re, im)
    c = omega**2
    if abs(c.imag) > 0:
        return
    a = constant_q_values(c.real, omega, x)
    b = constant_q_values(c.real + 1e-9, omega, x)
    assert abs(a - b) <= 1e-6 * max(1.0, abs(omega))


def test_rk_matches_closed_form(g):
    q = PotentialProfile.constant(g, 1.0)
    ref = constant_q_solution(1.0, 3.0, g).values.values
    tol = 1e-12
    assert np.max(np.abs(rk_solution(q, 3.0, tol).values.values - ref)) <= 10 * tol


@pytest.mark.parametrize("omega", [1.0, 20.0, 50.0])
def test_rk_q_zero(g, omega):
    q = PotentialProfile.constant(g, 0.0)
    tol = 1e-12
    got = rk_solution(q, omega, tol).values.values
    assert np.max(np.abs(got - np.exp(-1j * omega * g.nodes))) <= 10 * tol


def test_rk_tolerance_halving(g):
    q = PotentialProfile.from_callable(g, lambda t: t)
    best = rk_solution(q, 2.0, 1e-13).values.values
    devs = [np.max(np.abs(rk_solution(q, 2.0, tol).values.values - best)) for tol in (4e-8, 2e-8, 1e-8)]
    assert devs[0] > devs[2]
    assert all(d <= 100 * t for d, t in zip(devs, (4e-8, 2e-8, 1e-8)))


def test_rk_rejects_tiny_tolerance(g):
    with pytest.raises(DomainError):
        rk_solution(PotentialProfile.constant(g, 0.0), 1.0, 1e-15)
