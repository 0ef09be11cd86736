"""
Growth vs damping in the amplitude parameter
============================================

The amplitude parameter obeys dk/dt = alpha(t) k - 0.8 beta k^2: linear
gain against quadratic loss.  Three routes to the same curve are compared
(exact closed form, fixed-step RK4, first-order small-damping expansion),
then the two qualitative regimes: saturation at the fixed point, and
finite-time blowup when gain and initial sign conspire.
"""

import warnings

import numpy as np

from kklab import (
    ExpansionOutOfRangeWarning,
    FiniteTimeSingularityError,
    RiccatiModel,
    damping_fixed_point,
    riccati_closed_form,
    riccati_perturbative,
    solve_riccati_numeric,
)

model = RiccatiModel(alpha=1.0, beta=0.1, k0=1.0)
t = np.linspace(0.0, 2.0, 9)

k_exact = riccati_closed_form(model, t)
k_rk4 = solve_riccati_numeric(model, t, n_steps=10000)

# the expansion monitors its own validity; by t = 2 this parameter set
# has drifted past the trust region, and it says so
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", ExpansionOutOfRangeWarning)
    k_pert = riccati_perturbative(model, t)
for w in caught:
    print(f"note: {w.message}")

print("\nconstant gain alpha = 1, damping beta = 0.1, k(0) = 1")
print(f"{'t':>5s} {'closed':>12s} {'rk4':>12s} {'perturbative':>13s}")
for i in range(t.size):
    print(f"{t[i]:5.2f} {k_exact[i]:12.8f} {k_rk4[i]:12.8f} {k_pert[i]:13.8f}")
print(f"max |closed - rk4| = {np.max(np.abs(k_exact - k_rk4)):.2e}")

# under constant gain the curve saturates: gain and damping balance at
# k* = 1.25 alpha / beta, independent of where it started
kstar = damping_fixed_point(1.0, 0.1)
late = riccati_closed_form(model, np.array([60.0]))[0]
print(f"\nfixed point 1.25 alpha / beta = {kstar}")
print(f"closed form at t = 60         = {late:.10f}")

# time-dependent gain works the same way; pass a callable
wobble = RiccatiModel(alpha=lambda s: 0.3 + 0.2 * np.sin(s), beta=0.1, k0=1.0)
print(f"\noscillating gain, k at t = 5: {riccati_closed_form(wobble, np.array([5.0]))[0]:.8f}")

# negative initial data under pure damping runs away in finite time;
# the solver reports the singularity instead of returning garbage
doomed = RiccatiModel(alpha=0.0, beta=0.5, k0=-1.0)
try:
    riccati_closed_form(doomed, np.array([3.0]))
except FiniteTimeSingularityError as err:
    print(f"\nnegative k0 under damping: {err}")
