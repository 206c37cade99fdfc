from math import factorial

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import eval_laguerre

from laguerre_schrodinger import DomainError, gauss_laguerre, laguerre_eval
from laguerre_schrodinger.laguerre import (
    laguerre_explicit,
    laguerre_transform_of_exponential,
    scaled_laguerre_series,
)


def test_l5_at_half():
    assert abs(laguerre_eval(5, 0.5) - laguerre_explicit(5, 0.5)) <= 1e-14


@pytest.mark.parametrize("n", [0, 1, 2, 7])
def test_recurrence_matches_explicit(n):
    t = np.linspace(0, 4, 41)
    np.testing.assert_allclose(laguerre_eval(n, t), laguerre_explicit(n, t), rtol=0, atol=1e-13)


@pytest.mark.parametrize("n", [15, 60])
def test_recurrence_matches_mpmath(n):
    # the explicit sum cancels badly here, so use extended precision
    for t in (0.3, 2.0, 9.5, 40.0):
        ref = float(mpmath.laguerre(n, 0, t))
        assert abs(laguerre_eval(n, t) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_negative_order():
    with pytest.raises(DomainError):
        laguerre_eval(-1, 0.0)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 200), st.floats(0, 500))
def test_scaled_series_single_term(n, t):
    coef = np.zeros(n + 1)
    coef[n] = 1.0
    got = scaled_laguerre_series(coef, np.array([t]))[0]
    ref = eval_laguerre(n, t) * np.exp(-t / 2)
    assert abs(got) <= 1.0 + 1e-12
    assert abs(got - ref) <= 1e-9 * max(1.0, abs(ref))


def test_scaled_series_no_overflow():
    t = np.array([0.0, 50.0, 800.0, 3000.0])
    vals = scaled_laguerre_series(np.ones(5001), t)
    assert np.all(np.isfinite(vals))


def test_scaled_series_columns():
    coef = np.arange(12.0).reshape(4, 3)
    t = np.linspace(0, 3, 5)
    both = scaled_laguerre_series(coef, t)
    for j in range(3):
        np.testing.assert_allclose(both[:, j], scaled_laguerre_series(coef[:, j], t))


@pytest.mark.parametrize("K", [1, 5, 40, 200, 1001])
def test_gauss_laguerre_moments(K):
    # int_0^inf t^j e^{-t} dt = j!, exact for j <= 2K - 1; test a safe low range
    t, ws = gauss_laguerre(K)
    w = ws * np.exp(-t / 2)
    for j in range(min(2 * K, 12)):
        assert abs(np.sum(w * t**j) / factorial(j) - 1) <= 1e-12


def test_gauss_laguerre_high_degree():
    # L_n^2 integrates to 1 against e^{-t}; degree 2n needs K > n nodes
    n = 150
    t, ws = gauss_laguerre(n + 1)
    coef = np.zeros(n + 1)
    coef[n] = 1.0
    ell = scaled_laguerre_series(coef, t)
    # w L_n^2 = (w e^{t/2}) ell_n^2 e^{t/2}
    assert abs(np.sum(ws * ell**2 * np.exp(t / 2)) - 1) <= 1e-11


def test_gauss_laguerre_rejects_zero():
    with pytest.raises(DomainError):
        gauss_laguerre(0)


@pytest.mark.parametrize("omega", [0.0, 1.0, -3.0, 2 - 0.2j])
def test_transform_of_exponential(omega):
    t, ws = gauss_laguerre(400)
    # int L_n e^{-t} e^{i omega t} dt
    for n in (0, 1, 4):
        coef = np.zeros(n + 1)
        coef[n] = 1.0
        quad = np.sum(ws * scaled_laguerre_series(coef, t) * np.exp(1j * omega * t))
        assert abs(quad - laguerre_transform_of_exponential(n, omega)) <= 1e-6
