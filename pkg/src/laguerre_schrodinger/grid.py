"""Uniform grids, sampled functions and high-order cumulative integration.

Every function of ``x`` handled by the library lives on a :class:`Grid` as a
:class:`SampledFunction`.  The single quadrature primitive is
:func:`cumulative_integral`, which returns the indefinite integral
``F(x_j) = int_0^{x_j} f(s) ds`` at every node.

The rule is a composite interpolatory Newton-Cotes rule applied interval by
interval: the integral over ``[x_j, x_{j+1}]`` is taken from the degree-7
polynomial through the 8 nearest nodes (centred in the interior, one-sided
near the ends).  It integrates polynomials of degree <= 7 exactly and is of
global order 8 on smooth data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import GridError, NonFiniteError, VanishingDenominatorError

STENCIL = 8
MIN_NODES = STENCIL + 1
DEFAULT_NODES = 5001
DIVISION_FLOOR = 1e-14


@lru_cache(maxsize=None)
def _interval_weights(stencil=STENCIL):
    """Weights ``W[p, k] = int_p^{p+1} l_k(s) ds`` for nodes ``s = 0..stencil-1``.

    Computed in exact rational arithmetic, then rounded once.
    """
    nodes = [Fraction(k) for k in range(stencil)]
    weights = np.empty((stencil - 1, stencil))
    for k in range(stencil):
        # coefficients of the Lagrange basis polynomial l_k, lowest degree first
        poly = [Fraction(1)]
        denom = Fraction(1)
        for i in range(stencil):
            if i == k:
                continue
            poly = [Fraction(0)] + poly  # multiply by s
            for d in range(len(poly) - 1):
                poly[d] -= nodes[i] * poly[d + 1]
            denom *= nodes[k] - nodes[i]
        antider = [Fraction(0)] + [c / (d + 1) for d, c in enumerate(poly)]
        for p in range(stencil - 1):
            lo = sum(c * Fraction(p) ** d for d, c in enumerate(antider))
            hi = sum(c * Fraction(p + 1) ** d for d, c in enumerate(antider))
            weights[p, k] = float((hi - lo) / denom)
    return weights


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform grid ``0 = x_0 < x_1 < ... < x_{m-1} = d``."""

    nodes: np.ndarray
    h: float = field(repr=False)

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < MIN_NODES:
            raise GridError(f"too few nodes: need at least {MIN_NODES}")
        if nodes[0] != 0.0:
            raise GridError("first node must be 0")
        if np.any(np.diff(nodes) <= 0):
            raise GridError("nodes must be strictly increasing")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def d(self):
        return float(self.nodes[-1])

    @property
    def m(self):
        return self.nodes.size

    def __len__(self):
        return self.nodes.size

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Grid):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.nodes, other.nodes)

    def __hash__(self):
        return hash((self.m, self.d))

    def sample(self, func):
        """Sample a vectorised callable on the nodes."""
        values = np.broadcast_to(np.asarray(func(self.nodes)), self.nodes.shape)
        return SampledFunction(self, np.array(values))

    def constant(self, value):
        return SampledFunction(self, np.full(self.m, value))


def make_uniform_grid(d, m=DEFAULT_NODES):
    """Uniform grid with ``m`` nodes on ``[0, d]``."""
    if not d > 0 or not np.isfinite(d):
        raise GridError(f"interval length must be positive, got {d!r}")
    if m < MIN_NODES:
        raise GridError(f"too few nodes: need at least {MIN_NODES}, got {m}")
    nodes = np.linspace(0.0, float(d), int(m))
    return Grid(nodes, float(d) / (m - 1))


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Values of a (possibly complex) function at the nodes of a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.dtype.kind not in "fc":
            values = values.astype(float)
        if values.shape != self.grid.nodes.shape:
            raise GridError(
                f"expected {self.grid.m} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise NonFiniteError("sampled function has non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def x(self):
        return self.grid.nodes

    def __len__(self):
        return self.values.size

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def real(self):
        return SampledFunction(self.grid, self.values.real.copy())

    def conj(self):
        return SampledFunction(self.grid, np.conj(self.values))

    def __add__(self, other):
        return pointwise(self, other, "add")

    def __radd__(self, other):
        return pointwise(self, other, "add")

    def __sub__(self, other):
        return pointwise(self, other, "sub")

    def __rsub__(self, other):
        return pointwise(self, other, "scale", -1) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return pointwise(self, other, "scale")
        return pointwise(self, other, "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        if np.isscalar(other):
            return pointwise(self, 1 / other, "scale")
        return pointwise(self, other, "div")

    def __neg__(self):
        return pointwise(self, -1, "scale")


def _values_of(f, grid):
    if isinstance(f, SampledFunction):
        if f.grid != grid:
            raise GridError("sampled functions live on different grids")
        return f.values
    return f


def pointwise(f, g, op, floor=DIVISION_FLOOR):
    """Elementwise ``add``, ``sub``, ``mul``, ``div`` or ``scale``.

    ``g`` may be a sampled function on the same grid or a scalar.  For
    ``div`` the denominator must satisfy ``min |g| >= floor``.
    """
    a = f.values
    b = _values_of(g, f.grid)
    if op == "add":
        out = a + b
    elif op == "sub":
        out = a - b
    elif op in ("mul", "scale"):
        out = a * b
    elif op == "div":
        if np.min(np.abs(b)) < floor:
            raise VanishingDenominatorError("vanishing denominator")
        out = a / b
    else:
        raise ValueError(f"unknown operation {op!r}")
    return SampledFunction(f.grid, out)


def cumulative_values(values, h):
    """Cumulative integral of raw nodal values on a uniform grid of spacing ``h``.

    Array-level workhorse behind :func:`cumulative_integral`; no validation.
    """
    values = np.asarray(values)
    m = values.shape[-1]
    w = _interval_weights()
    s = STENCIL
    half = s // 2 - 1  # interior stencil starts 3 nodes left of the interval
    inc = np.empty(values.shape[:-1] + (m - 1,), dtype=np.result_type(values, float))
    # interior intervals j = half .. m-s+half use the centred stencil
    windows = sliding_window_view(values, s, axis=-1)
    inc[..., half : m - s + half + 1] = windows @ w[half]
    head = values[..., :s]
    tail = values[..., m - s :]
    for p in range(half):
        inc[..., p] = head @ w[p]
    for p in range(half + 1, s - 1):
        inc[..., m - s + p] = tail @ w[p]
    out = np.zeros(values.shape, dtype=inc.dtype)
    np.cumsum(inc, axis=-1, out=out[..., 1:])
    out[..., 1:] *= h
    return out


def cumulative_integral(f):
    """``F(x_j) = int_0^{x_j} f(s) ds`` at every node, with ``F(0) = 0`` exactly."""
    if not np.all(np.isfinite(f.values)):
        raise NonFiniteError("cannot integrate non-finite values")
    return SampledFunction(f.grid, cumulative_values(f.values, f.grid.h))


def definite_integral(f):
    """``int_0^d f``."""
    return cumulative_values(f.values, f.grid.h)[-1]
