"""Laguerre polynomials, scaled Laguerre functions and Gauss-Laguerre rules.

For large orders and arguments ``L_n(t)`` overflows long before
``L_n(t) e^{-t}`` does, so the series helpers work with the scaled functions
``ell_n(t) = L_n(t) e^{-t/2}`` (bounded by 1 in modulus for ``t >= 0``).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainError


def laguerre_eval(n, t):
    """``L_n(t)`` by the three-term recurrence.

    ``(k+1) L_{k+1} = (2k+1-t) L_k - k L_{k-1}``.  Vectorised over ``t``.
    """
    if n < 0:
        raise DomainError("Laguerre order must be nonnegative")
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 - t
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 - t) * cur - k * prev) / (k + 1)
    return cur if cur.ndim else float(cur)


def laguerre_explicit(n, t):
    """``L_n(t) = sum_k (-1)^k C(n,k) t^k / k!``; exact-sum reference for small ``n``."""
    from math import comb, factorial

    t = np.asarray(t, dtype=float)
    return sum((-1) ** k * comb(n, k) * t**k / factorial(k) for k in range(n + 1))


def scaled_laguerre_series(coef, t):
    """``sum_n coef[n] * L_n(t) * exp(-t/2)`` for every ``t``.

    ``coef`` has shape ``(N+1,)`` or ``(N+1, p)``; the result has shape
    ``t.shape`` or ``t.shape + (p,)``.  The scaled recurrence never forms
    ``L_n(t)`` itself, so large ``n`` and ``t`` do not overflow.
    """
    coef = np.asarray(coef)
    t = np.asarray(t, dtype=float)
    tt = t[..., None] if coef.ndim == 2 else t
    prev = np.exp(-tt / 2)
    acc = coef[0] * prev
    if coef.shape[0] == 1:
        return acc
    cur = (1.0 - tt) * prev
    acc = acc + coef[1] * cur
    for k in range(1, coef.shape[0] - 1):
        prev, cur = cur, ((2 * k + 1 - tt) * cur - k * prev) / (k + 1)
        acc = acc + coef[k + 1] * cur
    return acc


def _scaled_with_derivative(n, t):
    """``(ell_n(t), L_n'(t) e^{-t/2}, ell_{n+1}(t))``.

    The derivative follows the differentiated recurrence
    ``(k+1) L'_{k+1} = (2k+1-t) L'_k - L_k - k L'_{k-1}``, avoiding the
    cancellation in ``n (L_n - L_{n-1}) / t`` near ``t = 0``.
    """
    prev = np.exp(-t / 2)
    cur = (1.0 - t) * prev
    dprev = np.zeros_like(t)
    dcur = -prev
    for k in range(1, n + 1):
        nxt = ((2 * k + 1 - t) * cur - k * prev) / (k + 1)
        dnxt = ((2 * k + 1 - t) * dcur - cur - k * dprev) / (k + 1)
        prev, cur, dprev, dcur = cur, nxt, dcur, dnxt
    return prev, dprev, cur


@lru_cache(maxsize=16)
def gauss_laguerre(K):
    """Nodes ``t_k`` and scaled weights ``w_k exp(t_k / 2)`` of the K-point rule.

    ``sum_k w_k g(t_k) = int_0^inf g(t) e^{-t} dt`` exactly for polynomials
    ``g`` of degree ``<= 2K - 1``.  Initial nodes come from the Jacobi matrix
    (Golub-Welsch) and are polished by Newton steps on ``L_K``; weights use
    ``w_k = 1 / (t_k L_K'(t_k)^2)`` in scaled form.  Weights of nodes
    beyond the underflow threshold are set to zero.
    """
    if K < 1:
        raise DomainError("need at least one quadrature node")
    k = np.arange(K, dtype=float)
    t = eigh_tridiagonal(2 * k + 1, k[1:], eigvals_only=True)
    with np.errstate(all="ignore"):
        for _ in range(3):
            lk, dlk, _next = _scaled_with_derivative(K, t)
            step = lk / dlk
            t = t - np.where(np.isfinite(step), step, 0.0)
        _lk, dlk, _next = _scaled_with_derivative(K, t)
        w = np.exp(-t / 2) / (t * dlk**2)
    w = np.where(np.isfinite(w), w, 0.0)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def laguerre_transform_of_exponential(n, omega):
    """``int_0^inf L_n(t) exp(-(1 - i omega) t) dt = (-i omega)^n / (1 - i omega)^(n+1)``."""
    omega = complex(omega)
    return (-1j * omega) ** n / (1 - 1j * omega) ** (n + 1)
