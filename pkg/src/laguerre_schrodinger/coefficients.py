"""Laguerre coefficients ``a_n(x)`` of the transmutation kernel.

The kernel ``A(x, y)`` is expanded as
``A(x, x - t) = sum_n a_n(x) L_n(t) e^{-t}``.  Two independent routes to the
coefficients are provided:

* :func:`coefficients_direct` - closed formula in terms of formal powers,
  numerically usable only for small ``n``;
* :func:`coefficients_recurrent` - the recurrent integration
  ``a_n = a_{n-1} - 2 f int a_{n-1}/f + 2 f int f^{-2} int f' a_{n-1}``
  started from ``a_0 = f0 - 1``; this is the production path.

The recurrent build streams: only ``a_{n-1}`` and ``a_n`` are held at full
resolution, while the table keeps every ``stride``-th node (or nothing) and
running diagnostics are accumulated on the full grid.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .errors import DomainError, GridError, VanishingDenominatorError
from .grid import DIVISION_FLOOR, Grid, SampledFunction, cumulative_values
from .spps import FormalPowers, ParticularBasis

log = logging.getLogger(__name__)

DIRECT_MAX_ORDER = 30


@dataclass(frozen=True, eq=False)
class CoefficientTable:
    """Coefficients ``a_0..a_N`` plus full-grid diagnostics.

    ``values[n]`` holds ``a_n`` on ``grid`` (the computation grid or a
    strided subgrid of it); ``values`` is ``None`` for diagnostics-only
    builds.  ``decay[n] = max_x |a_n(x)|`` and
    ``residual[n] = max_x |1/2 int_0^x q - sum_{k<=n} a_k(x)|`` are always
    measured on the full computation grid.
    """

    values: np.ndarray | None
    grid: Grid | None
    method: str
    basis: ParticularBasis
    decay: np.ndarray
    residual: np.ndarray
    stride: int = 1

    @property
    def N(self):
        return self.decay.size - 1

    @property
    def stored(self):
        return self.values is not None

    def __len__(self):
        return self.decay.size

    def __getitem__(self, n):
        return SampledFunction(self.grid, self._require()[n])

    @property
    def a(self):
        """The stored coefficients as a list of sampled functions."""
        return [self[n] for n in range(len(self))]

    def _require(self):
        if self.values is None:
            raise DomainError("coefficient values were not stored (diagnostics-only build)")
        return self.values

    def column(self, x):
        """``[a_0(x), ..., a_N(x)]`` at a point of ``[0, d]``.

        Exact at stored nodes; elsewhere 8-point Lagrange interpolation in ``x``.
        """
        values = self._require()
        nodes = self.grid.nodes
        if not 0.0 <= x <= nodes[-1] * (1 + 1e-14):
            raise DomainError(f"x = {x} outside [0, {nodes[-1]}]")
        j = int(round(x / self.grid.h))
        if abs(nodes[min(j, nodes.size - 1)] - x) <= 1e-12 * max(1.0, nodes[-1]):
            return values[:, min(j, nodes.size - 1)]
        lo = int(np.clip(np.searchsorted(nodes, x) - 4, 0, nodes.size - 8))
        xs = nodes[lo : lo + 8]
        lag = np.array([np.prod([(x - xs[i]) / (xs[k] - xs[i]) for i in range(8) if i != k])
                        for k in range(8)])
        return values[:, lo : lo + 8] @ lag


def _half_integral_of_q(basis):
    return 0.5 * cumulative_values(basis.q.values, basis.grid.h)


def _storage(grid, stride):
    if stride is None:
        return None, None
    stride = int(stride)
    if stride < 1 or (grid.m - 1) % stride:
        raise GridError(f"stride {stride} must divide the number of grid intervals {grid.m - 1}")
    if stride == 1:
        return grid, slice(None)
    sub = Grid(grid.nodes[::stride], grid.h * stride)
    return sub, slice(None, None, stride)


def coefficients_direct(fp: FormalPowers, N: int) -> CoefficientTable:
    """Coefficients from the explicit formal-power formula.

    ``a_n = sum_j (-1)^j (phi_j - x^j) sum_{k=j}^n (-1)^k n! / ((n-k)! k! (k-j)! j!) x^(k-j)``.
    The inner sum is built by the ratio of consecutive terms,
    ``-(n-k) x / ((k+1)(k+1-j))``.  Alternating sums lose accuracy as ``n``
    grows, so ``N`` is capped at ``DIRECT_MAX_ORDER``.
    """
    if N < 0:
        raise DomainError("N must be nonnegative")
    if N > DIRECT_MAX_ORDER:
        raise DomainError(f"direct formula is limited to N <= {DIRECT_MAX_ORDER}; "
                          "use coefficients_recurrent")
    if fp.max_order < N:
        raise DomainError(f"need formal powers up to order {N}, have {fp.max_order}")
    x = fp.grid.nodes
    diff = np.array([fp.phi[j].values - x**j for j in range(N + 1)])
    out = np.zeros((N + 1, x.size), dtype=complex)
    for n in range(N + 1):
        for j in range(n + 1):
            term = (-1) ** j * comb(n, j) / factorial(j) * np.ones_like(x)
            inner = term.copy()
            for k in range(j, n):
                term = term * (-(n - k) * x / ((k + 1) * (k + 1 - j)))
                inner += term
            out[n] += (-1) ** j * diff[j] * inner
    half_q = _half_integral_of_q(fp.basis)
    decay = np.max(np.abs(out), axis=1)
    residual = np.max(np.abs(half_q - np.cumsum(out, axis=0)), axis=1)
    return CoefficientTable(out, fp.grid, "direct", fp.basis, decay, residual)


def coefficients_recurrent(basis: ParticularBasis, N: int, stride=1,
                           floor=DIVISION_FLOOR) -> CoefficientTable:
    """Coefficients by recurrent integration, streamed.

    ``stride`` keeps every ``stride``-th node of each ``a_n`` in the table
    (``None`` keeps nothing).  Memory is ``O(N * m / stride)``.
    """
    if N < 0:
        raise DomainError("N must be nonnegative")
    grid = basis.grid
    f = basis.f.values
    if np.min(np.abs(f)) < floor or np.min(np.abs(f * f)) < floor:
        raise VanishingDenominatorError("vanishing denominator: f must not vanish on the grid")
    store_grid, take = _storage(grid, stride)
    h = grid.h
    inv_f = 1.0 / f
    inv_f2 = inv_f * inv_f
    # stacked weights so both inner integrals cost one cumulative pass
    weights = np.vstack([inv_f, basis.f_prime.values])
    half_q = _half_integral_of_q(basis)

    table = None
    if store_grid is not None:
        table = np.empty((N + 1, store_grid.m), dtype=complex)
    decay = np.empty(N + 1)
    residual = np.empty(N + 1)

    a = (basis.f0.values - 1.0).astype(complex)
    a[0] = 0.0
    partial = np.zeros(grid.m, dtype=complex)
    for n in range(N + 1):
        if n:
            inner = cumulative_values(a * weights, h)
            outer = cumulative_values(inner[1] * inv_f2, h)
            a = a + 2.0 * f * (outer - inner[0])
            a[0] = 0.0
        if table is not None:
            table[n] = a[take]
        partial += a
        decay[n] = np.max(np.abs(a))
        residual[n] = np.max(np.abs(half_q - partial))
        if n and n % 10000 == 0:
            log.debug("recurrent coefficients: n = %d, sum-rule residual %.3e", n, residual[n])
    return CoefficientTable(table, store_grid, "recurrent", basis, decay, residual,
                            stride=0 if stride is None else int(stride))
