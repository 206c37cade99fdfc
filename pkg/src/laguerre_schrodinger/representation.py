"""Evaluation of the Laguerre representation and its diagnostics.

The solution of ``-u'' + q u = omega^2 u``, ``u(0) = 1``, ``u'(0) = -i omega``
is evaluated as

    u_N(omega, x) = e^{-i omega x} (1 + (1 - i omega)^{-1} sum_{n<=N} a_n(x) (-z)^n),
    z = i omega / (1 - i omega).

``|z| < 1`` for every real ``omega`` (and for ``Im omega > -1/2``), so the
powers of ``-z`` never overflow.  Truncation error is bounded by a function of
``x`` alone for real ``omega``.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coefficients import CoefficientTable, coefficients_recurrent
from .errors import DomainError, PoleError
from .grid import SampledFunction, cumulative_values
from .laguerre import gauss_laguerre, scaled_laguerre_series
from .spps import build_particular_basis

THREADS_ENV = "LAGSCHRO_THREADS"
SWEEP_CHUNK = 64


@dataclass(frozen=True, eq=False)
class SolutionEvaluation:
    """``u_N(omega, x)`` on the coefficient storage grid.

    For a spectrally shifted solve ``omega0`` and ``shift`` record the
    parameters actually fed to the representation; otherwise
    ``omega0 == omega`` and ``shift == 0``.
    """

    omega: complex
    N: int
    values: SampledFunction
    sum_rule_residual: float
    omega0: complex | None = None
    shift: float = 0.0

    @property
    def x(self):
        return self.values.grid.nodes


@dataclass(frozen=True, eq=False)
class KernelSlice:
    """``A(x, x - t)`` for fixed ``x`` from the truncated Laguerre series."""

    x: float
    t_nodes: np.ndarray
    values: np.ndarray
    N: int


def _check_omega(omega):
    omega = complex(omega)
    if 1 - 1j * omega == 0:
        raise PoleError("omega = -i is a pole of the representation")
    return omega


def _check_order(coeffs, N):
    if N is None:
        return coeffs.N
    if not 0 <= N <= coeffs.N:
        raise DomainError(f"truncation N = {N} outside 0..{coeffs.N}")
    return int(N)


def _z(omega):
    return 1j * omega / (1 - 1j * omega)


def evaluate_solution(coeffs: CoefficientTable, omega, N=None) -> SolutionEvaluation:
    """``u_N(omega, .)`` by Horner accumulation in ``-z``."""
    omega = _check_omega(omega)
    N = _check_order(coeffs, N)
    a = coeffs._require()
    w = -_z(omega)
    acc = a[N].copy()
    for n in range(N - 1, -1, -1):
        acc *= w
        acc += a[n]
    x = coeffs.grid.nodes
    u = np.exp(-1j * omega * x) * (1 + acc / (1 - 1j * omega))
    return SolutionEvaluation(omega, N, SampledFunction(coeffs.grid, u),
                              float(coeffs.residual[N]), omega0=omega)


def _thread_count():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def evaluate_sweep(coeffs: CoefficientTable, omegas, N=None, x_index=None):
    """``u_N(omega, x)`` for many ``omega`` at once, shape ``(len(omegas), n_x)``.

    Sums are formed as a matrix product with the powers ``(-z)^n``, in
    chunks of omegas.  Chunks run on ``$LAGSCHRO_THREADS`` worker threads.
    ``x_index`` restricts the evaluation to a subset of the storage nodes.
    """
    omegas = np.atleast_1d(np.asarray(omegas, dtype=complex))
    for om in omegas:
        _check_omega(om)
    N = _check_order(coeffs, N)
    a = coeffs._require()[: N + 1]
    x = coeffs.grid.nodes
    if x_index is not None:
        a = a[:, x_index]
        x = x[x_index]
    orders = np.arange(N + 1)
    out = np.empty((omegas.size, x.size), dtype=complex)

    def work(lo):
        om = omegas[lo : lo + SWEEP_CHUNK]
        powers = np.power(-_z(om)[:, None], orders[None, :])
        s = powers @ a
        out[lo : lo + SWEEP_CHUNK] = np.exp(-1j * np.outer(om, x)) * (
            1 + s / (1 - 1j * om)[:, None])

    starts = range(0, omegas.size, SWEEP_CHUNK)
    threads = _thread_count()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            list(pool.map(work, starts))
    else:
        for lo in starts:
            work(lo)
    return out


def sum_rule_residual(coeffs: CoefficientTable, q=None, N=None) -> float:
    """``max_x |1/2 int_0^x q - sum_{n<=N} a_n(x)|``.

    With ``q`` omitted (or equal to the potential the table was built for)
    the value recorded on the full grid during the build is returned.
    """
    N = _check_order(coeffs, N)
    if q is None or q is coeffs.basis.q or (
        q.grid == coeffs.basis.grid and np.array_equal(q.values, coeffs.basis.q.values)
    ):
        return float(coeffs.residual[N])
    a = coeffs._require()
    half_q = 0.5 * cumulative_values(q.values, q.grid.h)
    if q.grid != coeffs.basis.grid:
        raise DomainError("potential lives on a different grid than the coefficients")
    if coeffs.stride > 1:
        half_q = half_q[:: coeffs.stride]
    return float(np.max(np.abs(half_q - a[: N + 1].sum(axis=0))))


def coefficient_decay(coeffs: CoefficientTable) -> list:
    """``[max_x |a_n(x)| for n = 0..N]``."""
    return [float(v) for v in coeffs.decay]


def kernel_slice(coeffs: CoefficientTable, x, t_nodes, N=None) -> KernelSlice:
    """``A(x, x - t) = sum_{n<=N} a_n(x) L_n(t) e^{-t}`` at each ``t``."""
    N = _check_order(coeffs, N)
    t = np.asarray(t_nodes, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be nonnegative")
    col = coeffs.column(float(x))[: N + 1]
    # ell_n = L_n e^{-t/2}; one more factor e^{-t/2} gives the kernel
    vals = scaled_laguerre_series(col, t) * np.exp(-t / 2)
    return KernelSlice(float(x), t, vals, N)


def kernel_moment(coeffs: CoefficientTable, x, j, N=None, nodes=None):
    """``int_0^inf A(x, x - t) (x - t)^j dt`` by Gauss-Laguerre quadrature.

    The integrand is ``e^{-t}`` times a polynomial of degree ``N + j``, so
    ``ceil((N + j + 1) / 2)`` nodes make the rule exact.  A smaller ``nodes``
    request is raised to that count with a warning.  As ``N`` grows the
    moment tends to ``phi_j(x) - x^j``.
    """
    N = _check_order(coeffs, N)
    if j < 0:
        raise DomainError("moment order must be nonnegative")
    need = (N + j + 2) // 2
    if nodes is None:
        nodes = need
    elif nodes < need:
        warnings.warn(f"{nodes} Gauss-Laguerre nodes cannot integrate degree {N + j}; "
                      f"using {need}", RuntimeWarning, stacklevel=2)
        nodes = need
    t, w_scaled = gauss_laguerre(int(nodes))
    col = coeffs.column(float(x))[: N + 1]
    series = scaled_laguerre_series(col, t)
    live = w_scaled > 0
    return complex(np.sum(w_scaled[live] * series[live] * (x - t[live]) ** j))


def error_bound_factor(omega, x):
    """``e^{Im(omega) x} / sqrt(1 + 2 Im(omega))``; 1 for real omega."""
    im = complex(omega).imag
    if im <= -0.5:
        return None
    return np.exp(im * np.asarray(x)) / np.sqrt(1 + 2 * im)


def uniform_error_bound(coeffs: CoefficientTable, N, omega):
    """Computable surrogate of the omega-independent truncation bound.

    ``(sum_{n=N+1}^{N_max} max_x |a_n(x)|^2)^{1/2}`` approximates the
    Fourier-Laguerre tail norm with the coefficients at hand (a surrogate,
    not a certified bound: coefficients past ``N_max`` are ignored).  For
    complex ``omega`` it is multiplied by ``max_x e^{Im(omega) x} / sqrt(1 +
    2 Im(omega))``.  Returns ``None`` when ``Im omega <= -1/2``.
    """
    N = _check_order(coeffs, N)
    factor = error_bound_factor(omega, [0.0, coeffs.basis.grid.d])
    if factor is None:
        return None
    tail = float(np.sqrt(np.sum(coeffs.decay[N + 1 :] ** 2)))
    return tail * float(np.max(factor))


def _fast_root(target):
    """Root ``r`` of ``r^2 = target`` with ``Re r = 0`` and ``-1/2 < Im r < 0``, if any."""
    target = complex(target)
    scale = max(1.0, abs(target))
    if target.real < 0 and abs(target.imag) <= 1e-14 * scale:
        r = -1j * np.sqrt(-target.real)
        if -0.5 < r.imag < 0:
            return complex(r)
    return None


def shifted_solve(q, omega, N, lambda_shift, omega0=None, stride=1, coeffs=None):
    """Solve with the potential ``q + lambda_shift`` at ``omega0``.

    ``omega0`` satisfies ``omega0^2 = omega^2 + lambda_shift``; by default the
    root on the negative imaginary axis inside ``(-i/2, 0)`` is taken, where the
    series converges fastest.  The result solves ``-u'' + q u = omega^2 u`` with
    initial data ``u(0) = 1``, ``u'(0) = -i omega0`` (not ``-i omega``).
    ``coeffs`` may supply a prebuilt table for ``q + lambda_shift``.
    """
    omega = complex(omega)
    target = omega**2 + lambda_shift
    if omega0 is None:
        if lambda_shift == 0:
            omega0 = omega
        else:
            omega0 = _fast_root(target)
            if omega0 is None:
                raise DomainError(
                    f"omega0^2 = {target} has no root with Re = 0 and -1/2 < Im < 0; "
                    "pass omega0 explicitly"
                )
    else:
        omega0 = complex(omega0)
        if abs(omega0**2 - target) > 1e-10 * max(1.0, abs(target)):
            raise DomainError(f"omega0 = {omega0} does not satisfy omega0^2 = omega^2 + shift")
    _check_omega(omega0)
    if coeffs is None:
        basis = build_particular_basis(q.shifted(lambda_shift) if lambda_shift else q)
        coeffs = coefficients_recurrent(basis, N, stride=stride)
    ev = evaluate_solution(coeffs, omega0, N)
    return SolutionEvaluation(omega, ev.N, ev.values, ev.sum_rule_residual,
                              omega0=omega0, shift=float(lambda_shift))
