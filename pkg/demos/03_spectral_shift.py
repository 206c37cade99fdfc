"""Spectral shift: trade a large |omega| on the imaginary axis for a large
constant added to the potential, and evaluate where the series is fastest.

Solving -u'' + q u = omega^2 u with omega^2 = -100.0625 is the same as solving
-u'' + (q + 100) u = omega0^2 u with omega0 = -i/4.
"""

import numpy as np

from laguerre_schrodinger import PotentialProfile, make_uniform_grid, shifted_solve
from laguerre_schrodinger.oracles import constant_q_values

grid = make_uniform_grid(1.0, 5001)
q = PotentialProfile.constant(grid, 1.0)
omega = np.sqrt(-100.0625 + 0j)

for N in (5, 10, 20, 30):
    ev = shifted_solve(q, omega, N, lambda_shift=100.0)
    exact = constant_q_values(101.0, ev.omega0, grid.nodes)
    err = np.abs(ev.values.values - exact)
    print(f"N = {N:2d}  omega0 = {ev.omega0}  abs {err.max():.3e}  rel {(err / np.abs(exact)).max():.3e}")

print("max |u| on [0, 1]:", np.abs(exact).max())
