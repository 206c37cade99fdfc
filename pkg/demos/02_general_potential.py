"""A non-constant potential, checked against a Runge-Kutta reference.

Also shows the cheap diagnostics that need no reference solution: the
decay of max|a_n| and the sum-rule residual.
"""

import numpy as np

from laguerre_schrodinger import (
    build_particular_basis,
    coefficient_decay,
    coefficients_recurrent,
    evaluate_solution,
    make_uniform_grid,
    parse_potential,
    rk_solution,
    sum_rule_residual,
)

pot = parse_potential("x^2 + sin(3*x)")
print("parsed:", pot)
grid = make_uniform_grid(1.0, 2001)
q = pot.profile(grid)
basis = build_particular_basis(q)

coeffs = coefficients_recurrent(basis, 1000)
decay = coefficient_decay(coeffs)
print("\n    n   max|a_n|")
for n in (0, 1, 10, 100, 1000):
    print(f"{n:5d}   {decay[n]:.3e}")

print("\n    N   sum-rule residual")
for N in (0, 10, 100, 1000):
    print(f"{N:5d}   {sum_rule_residual(coeffs, N=N):.3e}")

# Runge-Kutta gets slower as omega grows; the series does not
print("\n omega     N   max error vs RK")
for omega in (1.0, 10.0, 50.0):
    ref = rk_solution(q, omega, tol=1e-12).values.values
    for N in (100, 1000):
        u = evaluate_solution(coeffs, omega, N).values.values
        print(f"{omega:6.1f} {N:5d}   {np.max(np.abs(u - ref)):.3e}")

# complex omega with Im omega > -1/2 converges very fast
omega = 4 - 0.25j
ref = rk_solution(q, omega, tol=1e-12).values.values
for N in (10, 30, 60):
    u = evaluate_solution(coeffs, omega, N).values.values
    print(f"omega = {omega}, N = {N}: {np.max(np.abs(u - ref)):.3e}")
