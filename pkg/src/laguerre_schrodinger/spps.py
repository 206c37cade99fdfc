"""Particular solutions, recursive integrals, formal powers and the SPPS series.

Everything upstream of the Laguerre coefficients lives here:

* :func:`build_particular_basis` solves ``f'' = q f`` for the two canonical
  solutions ``f0`` (``f0(0)=1, f0'(0)=0``) and ``f1`` (``f1(0)=0, f1'(0)=1``)
  by successive approximation on the grid, and forms the nonvanishing
  combination ``f = f0 + i f1``.
* :func:`recursive_integrals` and :func:`build_formal_powers` produce the
  formal powers ``phi_k``, which play the role of ``x**k`` for the perturbed
  equation.
* :func:`spps_solution` sums the spectral parameter power series
  ``u = sum_n (-i omega)^n phi_n / n!``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, VanishingDenominatorError
from .grid import DIVISION_FLOOR, SampledFunction, cumulative_values

PICARD_TOL = 1e-15
PICARD_MAX_ITER = 200


@dataclass(frozen=True, eq=False)
class PotentialProfile(SampledFunction):
    """Real samples of the potential ``q`` on a grid.

    ``func`` optionally keeps the vectorised callable the samples came from,
    so that oracles can evaluate ``q`` between nodes.
    """

    func: object = field(default=None, repr=False)
    label: str = ""

    def __post_init__(self):
        super().__post_init__()
        if np.iscomplexobj(self.values):
            if np.any(self.values.imag != 0):
                raise DomainError("the potential must be real valued")
            object.__setattr__(self, "values", self.values.real.copy())

    @classmethod
    def from_callable(cls, grid, func, label=""):
        values = np.broadcast_to(np.asarray(func(grid.nodes), dtype=float), grid.nodes.shape)
        return cls(grid, np.array(values), func=func, label=label)

    @classmethod
    def constant(cls, grid, c):
        c = float(c)
        return cls(grid, np.full(grid.m, c), func=lambda x: np.full_like(np.asarray(x, float), c),
                   label=repr(c))

    def shifted(self, lam):
        """The profile of ``q + lam``."""
        func = None
        if self.func is not None:
            base = self.func
            func = lambda x: base(x) + lam  # noqa: E731
        label = f"({self.label}) + {lam!r}" if self.label else ""
        return PotentialProfile(self.grid, self.values + lam, func=func, label=label)

    def __call__(self, x):
        """Evaluate ``q`` at arbitrary points (callable if known, else cubic spline)."""
        if self.func is not None:
            return np.asarray(self.func(x), dtype=float)
        from scipy.interpolate import CubicSpline

        return CubicSpline(self.grid.nodes, self.values)(x)


@dataclass(frozen=True, eq=False)
class ParticularBasis:
    """Solutions ``f0, f1`` of ``f'' = q f`` and ``f = f0 + i f1``."""

    q: PotentialProfile
    f0: SampledFunction
    f1: SampledFunction
    f0_prime: SampledFunction
    f1_prime: SampledFunction
    f: SampledFunction
    f_prime: SampledFunction
    iterations: int = 0

    @property
    def grid(self):
        return self.q.grid

    @property
    def fprime0(self):
        return complex(self.f_prime.values[0])

    def wronskian(self):
        """``f0 f1' - f0' f1``, identically 1 in exact arithmetic."""
        return self.f0.values * self.f1_prime.values - self.f0_prime.values * self.f1.values


def build_particular_basis(q, tol=PICARD_TOL, max_iter=PICARD_MAX_ITER):
    """Solve ``f'' = q f`` for ``f0`` and ``f1`` by successive approximation.

    ``f0 = sum_k Y_k`` with ``Y_0 = 1`` and ``Y_k`` the double cumulative
    integral of ``q Y_{k-1}``; ``f1`` likewise from ``Y_0 = x``.  Iteration
    stops once the sup norm of the newest term drops below ``tol`` relative to
    the partial sum.  Derivatives come from ``f' = f'(0) + int_0^x q f``.
    """
    grid = q.grid
    h = grid.h
    qv = q.values
    term = np.vstack([np.ones(grid.m), grid.nodes])
    total = term.copy()
    for it in range(1, max_iter + 1):
        term = cumulative_values(cumulative_values(qv * term, h), h)
        total += term
        scale = np.maximum(1.0, np.max(np.abs(total), axis=1))
        if np.all(np.max(np.abs(term), axis=1) <= tol * scale):
            break
    else:
        raise ConvergenceError(
            f"successive approximation did not converge in {max_iter} iterations; "
            "refine the grid or shorten the interval"
        )
    if not np.all(np.isfinite(total)):
        raise ConvergenceError("successive approximation overflowed")
    deriv = cumulative_values(qv * total, h)
    deriv[1] += 1.0
    f0, f1 = total
    f = f0 + 1j * f1
    f_prime = deriv[0] + 1j * deriv[1]
    return ParticularBasis(
        q=q,
        f0=SampledFunction(grid, f0),
        f1=SampledFunction(grid, f1),
        f0_prime=SampledFunction(grid, deriv[0]),
        f1_prime=SampledFunction(grid, deriv[1]),
        f=SampledFunction(grid, f),
        f_prime=SampledFunction(grid, f_prime),
        iterations=it,
    )


def _both_sequences(f0, n_max, floor):
    """Stacked ``[X^(n), Xtilde^(n)]`` for ``n = 0..n_max`` as raw arrays."""
    sq = f0.values * f0.values
    if np.min(np.abs(sq)) < floor:
        raise VanishingDenominatorError(
            "vanishing denominator: the particular solution has zeros on the grid; "
            "use the nonvanishing combination f = f0 + i f1"
        )
    inv = 1.0 / sq
    h = f0.grid.h
    out = np.empty((n_max + 1, 2, f0.grid.m), dtype=np.result_type(sq, float))
    out[0] = 1.0
    for n in range(1, n_max + 1):
        # X^(n) weight is (f0^2)^((-1)^n); Xtilde^(n) uses the opposite power
        weights = np.vstack([inv, sq]) if n % 2 else np.vstack([sq, inv])
        out[n] = n * cumulative_values(out[n - 1] * weights, h)
    return out


def recursive_integrals(f0, n_max, variant="X", floor=DIVISION_FLOOR):
    """The sequence ``[X^(0), ..., X^(n_max)]`` (or the tilde variant).

    ``X^(n) = n int_0^x X^(n-1) (f0^2)^((-1)^n)`` and ``Xtilde^(n)`` with the
    exponent ``(-1)^(n-1)``.  ``f0`` may be any nonvanishing solution.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    if variant not in ("X", "Xtilde"):
        raise ValueError(f"unknown variant {variant!r}")
    seq = _both_sequences(f0, n_max, floor)[:, 0 if variant == "X" else 1]
    return [SampledFunction(f0.grid, v) for v in seq]


@dataclass(frozen=True, eq=False)
class FormalPowers:
    """``phi[k]`` for ``k = 0..max_order`` together with the basis they came from."""

    phi: list
    basis: ParticularBasis
    via: str = "f"

    @property
    def max_order(self):
        return len(self.phi) - 1

    @property
    def grid(self):
        return self.basis.grid

    def __getitem__(self, k):
        return self.phi[k]

    def values(self):
        return np.array([p.values for p in self.phi])


def _powers_from(g, K, floor):
    """``phi_k = g X^(k)`` (k odd) or ``g Xtilde^(k)`` (k even) for ``k = 0..K``."""
    seq = _both_sequences(g, K, floor)
    out = np.empty((K + 1, g.grid.m), dtype=seq.dtype)
    out[0::2] = seq[0::2, 1] * g.values
    out[1::2] = seq[1::2, 0] * g.values
    return out


def build_formal_powers(basis, K, via="f", floor=DIVISION_FLOOR):
    """Formal powers ``phi_0..phi_K`` associated with ``f0``.

    ``via="f"`` (default) builds the powers ``Phi_k`` of the nonvanishing
    solution ``f = f0 + i f1`` and converts them,
    ``phi_k = Phi_k`` for odd ``k`` and ``Phi_k - f'(0)/(k+1) Phi_{k+1}``
    for even ``k``.  ``via="f0"`` uses ``f0`` directly and fails if it has
    zeros.
    """
    if K < 0:
        raise DomainError("K must be nonnegative")
    grid = basis.grid
    if via == "f0":
        phi = _powers_from(basis.f0, K, floor)
    elif via == "f":
        big = _powers_from(basis.f, K + 1, floor)
        phi = big[: K + 1].copy()
        for k in range(0, K + 1, 2):
            phi[k] -= basis.fprime0 / (k + 1) * big[k + 1]
    else:
        raise ValueError(f"unknown construction {via!r}")
    return FormalPowers([SampledFunction(grid, v) for v in phi], basis, via)


def spps_solution(fp, omega, trunc):
    """Partial sum ``sum_{n<=trunc} (-i omega)^n phi_n / n!``.

    Solves ``-u'' + q u = omega^2 u`` with ``u(0) = 1, u'(0) = -i omega``.
    The factor ``(-i omega)^n / n!`` is carried by recurrence so that no
    factorial is ever formed.
    """
    if trunc < 0 or trunc > fp.max_order:
        raise DomainError(f"truncation {trunc} exceeds available formal powers ({fp.max_order})")
    c = 1.0 + 0j
    step = -1j * complex(omega)
    acc = fp.phi[0].values.astype(complex)
    for n in range(1, trunc + 1):
        c *= step / n
        acc = acc + c * fp.phi[n].values
    return SampledFunction(fp.grid, acc)


def spps_tail(fp, omega, trunc):
    """``max_x |(-i omega)^M phi_M / M!|`` for ``M = trunc``: size of the last kept term."""
    if trunc < 0 or trunc > fp.max_order:
        raise DomainError(f"truncation {trunc} exceeds available formal powers ({fp.max_order})")
    c = 1.0 + 0j
    step = -1j * complex(omega)
    for n in range(1, trunc + 1):
        c *= step / n
    return float(np.max(np.abs(c * fp.phi[trunc].values)))
