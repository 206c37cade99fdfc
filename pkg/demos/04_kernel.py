"""The transmutation kernel behind the representation.

A(x, x - t) is assembled from the same coefficients.  Its value at t = 0
recovers half the integral of q, and its moments against (x - t)^j give the
formal powers phi_j(x) - x^j.
"""

import numpy as np

from laguerre_schrodinger import (
    build_formal_powers,
    build_particular_basis,
    coefficients_recurrent,
    kernel_moment,
    kernel_slice,
    make_uniform_grid,
    parse_potential,
)

grid = make_uniform_grid(1.0, 2001)
pot = parse_potential("1 + cos(5*x)")
q = pot.profile(grid)
basis = build_particular_basis(q)
coeffs = coefficients_recurrent(basis, 4000, stride=10)

for x in (0.5, 1.0):
    exact = 0.5 * (x + np.sin(5 * x) / 5)
    for N in (100, 1000, 4000):
        diag = kernel_slice(coeffs, x, [0.0], N=N).values[0]
        print(f"x = {x}: N = {N:4d}  A(x, x) = {diag.real:.6f}   (1/2) int q = {exact:.6f}")

ks = kernel_slice(coeffs, 1.0, np.linspace(0, 8, 9))
print("\n t    A(1, 1 - t)")
for t, v in zip(ks.t_nodes, ks.values):
    print(f"{t:3.0f}   {v.real:+.3e}")

fp = build_formal_powers(basis, 3)
print("\n j   moment                 phi_j(1) - 1")
for j in range(4):
    m = kernel_moment(coeffs, 1.0, j, N=100)
    print(f"{j:2d}   {m.real:+.15f}   {fp[j].values[-1].real - 1:+.15f}")
