"""Accuracy of the Laguerre representation across a wide band of frequencies.

q = 1 on [0, 1] has a closed-form solution, so the error of the truncated
series can be measured exactly.  Run: python3 demos/01_constant_potential_sweep.py
"""

import time

import numpy as np

from laguerre_schrodinger import (
    PotentialProfile,
    build_particular_basis,
    coefficients_recurrent,
    evaluate_sweep,
    make_uniform_grid,
)
from laguerre_schrodinger.example1 import log_linear_sweep
from laguerre_schrodinger.oracles import constant_q_values

grid = make_uniform_grid(1.0, 5001)
q = PotentialProfile.constant(grid, 1.0)

# f0 = cosh x, f1 = sinh x for this potential
basis = build_particular_basis(q)
print("Picard iterations:", basis.iterations)
print("max |f0 - cosh|:", np.max(np.abs(basis.f0.values - np.cosh(grid.nodes))))

# coefficients are built once and reused for every omega;
# keeping every 10th node is plenty for plotting errors
t0 = time.perf_counter()
coeffs = coefficients_recurrent(basis, 100, stride=10)
print(f"a_0..a_100 in {time.perf_counter() - t0:.2f} s")

omegas = log_linear_sweep(1000.0, 2001)
x = coeffs.grid.nodes
u = evaluate_sweep(coeffs, omegas)
err = np.abs(u - constant_q_values(1.0, omegas[:, None], x[None, :])).max(axis=1)

print("\n   omega      max_x error")
for w in (0.0, 1.0, 5.0, 10.0, 30.0, 100.0, 300.0, 1000.0):
    i = int(np.argmin(np.abs(omegas - w)))
    print(f"{omegas[i]:8.2f}   {err[i]:.3e}")

# the error is largest for moderate omega and falls off for large omega
i = int(np.argmax(err))
print(f"\npeak error {err[i]:.3e} at omega = {omegas[i]:.3f}")
print(f"error at omega = 1000: {err[-1]:.3e}")

# more terms push the error down uniformly
for N in (100, 400, 1600):
    c = coefficients_recurrent(basis, N, stride=50)
    e = np.abs(evaluate_sweep(c, omegas) - constant_q_values(1.0, omegas[:, None], c.grid.nodes[None, :]))
    print(f"N = {N:5d}: max error over the sweep {e.max():.3e}")
