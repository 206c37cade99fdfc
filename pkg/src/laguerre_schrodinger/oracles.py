"""Reference solutions used for verification only.

``constant_q_solution`` is exact for constant potentials; ``rk_solution``
integrates the equation directly with an adaptive Runge-Kutta method for an
arbitrary potential.  Neither shares code with the Laguerre machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConvergenceError, DomainError
from .grid import Grid, SampledFunction


@dataclass(frozen=True, eq=False)
class OracleSolution:
    omega: complex
    values: SampledFunction
    method: str
    est_accuracy: float


def _sin_over_k(k, x):
    """``sin(k x) / k`` with the removable singularity at ``k = 0`` handled."""
    kx = k * x
    small = np.abs(kx) < 1e-3
    safe_k = np.where(k == 0, 1.0, k)
    out = np.where(small, 0.0, np.sin(kx) / safe_k)
    series = x * (1 - kx**2 / 6 + kx**4 / 120 - kx**6 / 5040)
    return np.where(small, series, out)


def constant_q_values(c, omega, x):
    """``u(x) = cos(kx) - i omega sin(kx)/k`` with ``k^2 = omega^2 - c``.

    The expression is even in ``k``, so the branch of the square root is
    irrelevant; at ``omega^2 = c`` it reduces to ``1 - i omega x``.
    Vectorised in both ``omega`` and ``x`` (broadcasting).
    """
    omega = np.asarray(omega, dtype=complex)
    x = np.asarray(x, dtype=float)
    k = np.sqrt(omega**2 - c)
    return np.cos(k * x) - 1j * omega * _sin_over_k(k, x)


def constant_q_solution(c, omega, grid: Grid) -> OracleSolution:
    """Exact solution for ``q = c`` with ``u(0) = 1``, ``u'(0) = -i omega``."""
    omega = complex(omega)
    vals = constant_q_values(float(c), omega, grid.nodes)
    return OracleSolution(omega, SampledFunction(grid, vals), "closed_form_constant", 0.0)


def rk_solution(q, omega, tol=1e-12) -> OracleSolution:
    """Integrate ``u'' = (q - omega^2) u`` from ``(1, -i omega)`` on ``q.grid``.

    Uses the adaptive Dormand-Prince 8(5,3) pair with its 7th-order dense
    output, absolute and relative tolerance both ``tol``.  Cost grows with
    ``|omega|``.  ``q`` is evaluated between nodes through ``q(x)``.
    """
    if tol < 1e-13:
        raise DomainError("tolerance below 1e-13 is not attainable in double precision")
    omega = complex(omega)
    grid = q.grid
    w2 = omega**2

    def rhs(x, y):
        return np.array([y[1], (q(x) - w2) * y[0]])

    sol = solve_ivp(rhs, (0.0, grid.d), np.array([1.0, -1j * omega]), method="DOP853",
                    rtol=tol, atol=tol, dense_output=True)
    if not sol.success:
        raise ConvergenceError(f"Runge-Kutta integration failed: {sol.message}")
    vals = sol.sol(grid.nodes)[0]
    return OracleSolution(omega, SampledFunction(grid, vals), "rk_adaptive", 10 * tol)
