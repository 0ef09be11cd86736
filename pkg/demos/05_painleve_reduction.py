"""
Mapping the momentum flow onto Painleve II
==========================================

When the forcing in dk/dt = n + m t + lam k^2 ramps linearly in time, a
rescaling of both variables turns the quadratic flow into the second
Painleve transcendent q'' = 2 q^3 + z q + delta, with the constant
delta = 1/2 induced by the chain rule.  This script builds the
transformation, integrates both sides independently, and checks that
they meet.
"""

import numpy as np

from kklab import (
    INDUCED_DELTA,
    airy_type_solution,
    pii_exact_rational,
    pii_residual,
    reduce_to_pii,
    rk4_solve,
    solve_pii,
    yablonskii_vorobev,
)

# --- the reduction map --------------------------------------------------
prob = reduce_to_pii(n=0.3, m=1.7, lam=-0.12, delta=INDUCED_DELTA)
print("flow dk/dt = n + m t + lam k^2 with n = 0.3, m = 1.7, lam = -0.12")
print(f"scale factors: k_scale = {prob.k_scale:.8f}, z_scale = {prob.z_scale:.8f}")
print(f"induced constant delta = {INDUCED_DELTA}")

# round trip: (t, k) -> (z, q) -> (t, k) is the identity
t = np.linspace(0.0, 2.0, 5)
k = np.linspace(0.5, 1.2, 5)
z, q = prob.to_pii_variables(t, k)
t_back, k_back = prob.from_pii_variables(z, q)
print(f"round-trip error: {max(np.max(np.abs(t - t_back)), np.max(np.abs(k - k_back))):.2e}")

# --- integrate the momentum flow, transport it, measure the defect ------
tt = np.linspace(0.0, 2.0, 4001)
ktraj = rk4_solve(lambda s, y: np.array([prob.momentum_rhs(s, y[0])]), np.array([0.5]), tt, n_steps=8000)[:, 0]
zz, qq = prob.to_pii_variables(tt, ktraj)
defect = np.max(np.abs(pii_residual(zz, qq, INDUCED_DELTA)))
print(f"transported trajectory: max |q'' - 2q^3 - zq - delta| = {defect:.2e}")

# the same trajectory measured against the wrong constant fails loudly
wrong = np.median(np.abs(pii_residual(zz, qq, 0.0)))
print(f"same trajectory vs delta = 0: median defect = {wrong:.3f} (should be ~{INDUCED_DELTA})")

# --- known exact solutions as cross-checks ------------------------------
sol = solve_pii(1.0, -1.0, 1.0, (1.0, 5.0), n_steps=20000)
print(f"\ndelta = 1 vs exact -1/z:     max error {np.max(np.abs(sol.q - pii_exact_rational(1, sol.z_grid))):.2e}")

half = solve_pii(0.5, -1.0, 1.5, (1.0, 3.0), n_steps=20000)
oracle = airy_type_solution(half.z_grid, 1.0, 1.0)
print(f"delta = 1/2 vs Airy oracle:  max error {np.max(np.abs(half.q - oracle)):.2e}")

# rational-solution ladder: polynomials whose log-derivative difference
# solves the equation at integer delta
for order in (2, 3):
    poly = yablonskii_vorobev(order)
    print(f"ladder polynomial {order}: degree {poly.degree()}, coefficients {poly.coef[::-1]}")

# integrating into a movable pole truncates the trajectory and reports an
# estimated pole location instead of failing
stopped = solve_pii(0.5, 2.0, 5.0, (1.0, 6.0), n_steps=20000)
print(f"\npole run: pole_found = {stopped.pole_found}, estimated z_p = {stopped.pole_estimate:.4f}")
print(f"trajectory kept {stopped.z_grid.size} of 20001 points before the pole")
