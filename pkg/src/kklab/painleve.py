"""Reduction of the momentum flow to Painleve II, plus a validated PII solver.

The first-order momentum flow with frozen linear growth,

    dk/dt = n + m t + lambda k^2,

maps onto the Painleve II equation q''(z) = z q + 2 q^3 + delta through

    tau = n + m t,
    z   = c_z tau,   c_z = (2 lambda / m^2)^(1/3),
    k   = c_k q,     c_k = (2 m / lambda^2)^(1/3),

with real cube roots throughout, so any signs of m != 0 and lambda != 0 are
admissible.  The constants were re-derived from scratch (substituting the
maps into the curvature equation k'' = 2 delta m + 2 lambda k tau
+ 2 lambda^2 k^3 and matching coefficients); all three matching conditions
pin the same c_z, c_k, and carry delta through with coefficient exactly 1.

A trajectory of the first-order flow, transported through the maps,
satisfies PII with delta = 1/2: the transported first-order relation is
q' = z/2 + q^2, and differentiating gives q'' = 1/2 + 2 q q' = z q + 2 q^3
+ 1/2.  That constant is exposed as INDUCED_DELTA.  The ``delta`` field of
PainleveProblem stays caller-chosen (default 0): the second-order equation
admits any integration constant, and which one applies depends on what the
trajectory is transported from.

Reference solutions for validation: the rational solutions at integer delta
built from Yablonskii-Vorob'ev polynomials, and the log-derivative of an
oscillatory linear companion (phi'' + (z/2) phi = 0) at delta = 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from scipy.integrate import solve_ivp

__all__ = [
    "INDUCED_DELTA",
    "SingularScalingError",
    "PoleError",
    "PainleveProblem",
    "PiiSolution",
    "reduce_to_pii",
    "solve_pii",
    "pii_residual",
    "yablonskii_vorobev",
    "pii_exact_rational",
    "airy_type_solution",
]

#: PII parameter satisfied by transported first-order momentum trajectories
INDUCED_DELTA = 0.5

#: |q| beyond which the integrator reports a (movable) pole
POLE_THRESHOLD = 1e8

#: |denominator| below which rational solutions refuse to evaluate
_POLE_TOL = 1e-12


class SingularScalingError(ValueError):
    """m = 0 or lambda = 0: the reduction scaling does not exist."""


class PoleError(ArithmeticError):
    """Evaluation requested at (or too close to) a pole of the solution."""


@dataclass(frozen=True)
class PainleveProblem:
    """Reduction data: flow coefficients, target delta, and the scaling maps.

    ``lam`` is the quadratic coefficient of the flow (named so because
    ``lambda`` is reserved in Python); when driven from the damped momentum
    model it equals -(4/5) beta, but any nonzero value is accepted.
    """

    n: float
    m: float
    lam: float
    delta: float = 0.0

    def __post_init__(self):
        for name in ("n", "m", "lam", "delta"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.m == 0.0 or self.lam == 0.0:
            raise SingularScalingError("reduction requires m != 0 and lambda != 0")

    @property
    def k_scale(self) -> float:
        """c_k = (2m / lambda^2)^(1/3), real cube root."""
        return float(np.cbrt(2.0 * self.m / (self.lam * self.lam)))

    @property
    def z_scale(self) -> float:
        """c_z = (2 lambda / m^2)^(1/3), real cube root; z = c_z (n + m t)."""
        return float(np.cbrt(2.0 * self.lam / (self.m * self.m)))

    # -- maps ------------------------------------------------------------

    def tau_of_t(self, t):
        return self.n + self.m * np.asarray(t, dtype=float)

    def z_of_t(self, t):
        return self.z_scale * self.tau_of_t(t)

    def t_of_z(self, z):
        return (np.asarray(z, dtype=float) / self.z_scale - self.n) / self.m

    def q_of_k(self, k):
        return np.asarray(k, dtype=float) / self.k_scale

    def k_of_q(self, q):
        return self.k_scale * np.asarray(q, dtype=float)

    def to_pii_variables(self, t, k):
        """Transport a (t, k) trajectory to (z, q)."""
        return self.z_of_t(t), self.q_of_k(k)

    def from_pii_variables(self, z, q):
        """Inverse transport, (z, q) back to (t, k)."""
        return self.t_of_z(z), self.k_of_q(q)

    # -- the flow itself -------------------------------------------------

    def momentum_rhs(self, t, k):
        """dk/dt = n + m t + lam k^2."""
        return self.n + self.m * t + self.lam * k * k

    def curvature_rhs(self, t, k):
        """k'' of the second-order form, 2 delta m + 2 lam k tau + 2 lam^2 k^3."""
        tau = self.tau_of_t(t)
        return 2.0 * self.delta * self.m + 2.0 * self.lam * k * tau + 2.0 * self.lam ** 2 * k ** 3


def reduce_to_pii(n: float, m: float, lam: float, delta: float = 0.0) -> PainleveProblem:
    """Build the reduction maps for dk/dt = n + m t + lam k^2."""
    return PainleveProblem(n=n, m=m, lam=lam, delta=delta)


@dataclass(frozen=True)
class PiiSolution:
    """PII trajectory with finite-difference residual diagnostics.

    When the integration ran into a movable pole, the arrays are truncated
    at the last admissible point, ``pole_found`` is set, and
    ``pole_estimate`` locates the pole from the local simple-pole form
    (z_p ~ z + q/q').  Poles are expected PII behavior, not failure.
    """

    z_grid: np.ndarray
    q: np.ndarray
    q_prime: np.ndarray
    residual: np.ndarray
    delta: float
    pole_found: bool = False
    pole_estimate: float | None = None

    @property
    def max_residual(self) -> float:
        return float(np.max(np.abs(self.residual))) if self.residual.size else np.nan


def pii_residual(z_grid: np.ndarray, q: np.ndarray, delta: float) -> np.ndarray:
    """|q'' - (z q + 2 q^3 + delta)| with q'' from strided 4th-order differences.

    The stride is chosen so the effective spacing is ~1e-3, balancing
    truncation against rounding; the few edge points where the stencil does
    not fit reuse the nearest interior value, keeping the max-norm
    well-defined.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    q = np.asarray(q, dtype=float)
    n = z_grid.size
    out = np.full(n, np.nan)
    if n < 5:
        return out
    h = z_grid[1] - z_grid[0]
    s = max(1, int(round(1e-3 / abs(h))))
    while 4 * s >= n and s > 1:
        s //= 2
    if 4 * s >= n:
        return out
    i = np.arange(2 * s, n - 2 * s)
    d2 = (-q[i - 2 * s] + 16.0 * q[i - s] - 30.0 * q[i] + 16.0 * q[i + s] - q[i + 2 * s]) / (12.0 * (s * h) ** 2)
    out[i] = np.abs(d2 - (z_grid[i] * q[i] + 2.0 * q[i] ** 3 + delta))
    out[: 2 * s] = out[2 * s]
    out[n - 2 * s :] = out[n - 2 * s - 1]
    return out


def solve_pii(delta: float, q0: float, q0_prime: float, z_span, n_steps: int = 10000) -> PiiSolution:
    """Fixed-step RK4 integration of q'' = z q + 2 q^3 + delta.

    Integrates the first-order system (q, q') from z_span[0] to z_span[1]
    (either direction) with n_steps uniform steps.  When |q| crosses 1e8
    the run stops and reports the pole location estimate instead of raising.
    """
    for name, v in (("delta", delta), ("q0", q0), ("q0_prime", q0_prime)):
        if not np.isfinite(v):
            raise ValueError(f"{name} must be finite")
    z0, z1 = float(z_span[0]), float(z_span[1])
    if z0 == z1:
        raise ValueError("z_span must have nonzero length")
    if n_steps < 4:
        raise ValueError("n_steps must be >= 4")
    h = (z1 - z0) / n_steps
    zs = z0 + h * np.arange(n_steps + 1)
    qs = np.empty(n_steps + 1)
    ps = np.empty(n_steps + 1)
    qs[0], ps[0] = q0, q0_prime
    q, p = q0, q0_prime
    pole_found = False
    pole_estimate = None
    last = n_steps
    for i in range(n_steps):
        z = zs[i]

        def f(zz, qq, pp):
            return pp, zz * qq + 2.0 * qq ** 3 + delta

        k1q, k1p = f(z, q, p)
        k2q, k2p = f(z + 0.5 * h, q + 0.5 * h * k1q, p + 0.5 * h * k1p)
        k3q, k3p = f(z + 0.5 * h, q + 0.5 * h * k2q, p + 0.5 * h * k2p)
        k4q, k4p = f(z + h, q + h * k3q, p + h * k3p)
        q = q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        p = p + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if not (np.isfinite(q) and np.isfinite(p)) or abs(q) > POLE_THRESHOLD:
            pole_found = True
            last = i  # last accepted sample index
            qa, pa = qs[i], ps[i]
            if pa != 0.0 and np.isfinite(qa) and np.isfinite(pa):
                pole_estimate = float(zs[i] + qa / pa)
            else:
                pole_estimate = float(zs[i])
            break
        qs[i + 1], ps[i + 1] = q, p
    zs, qs, ps = zs[: last + 1], qs[: last + 1], ps[: last + 1]
    residual = pii_residual(zs, qs, delta)
    return PiiSolution(
        z_grid=zs,
        q=qs,
        q_prime=ps,
        residual=residual,
        delta=delta,
        pole_found=pole_found,
        pole_estimate=pole_estimate,
    )


def yablonskii_vorobev(n: int) -> Polynomial:
    """Yablonskii-Vorob'ev polynomial Q_n from the standard recurrence.

    Q_0 = 1, Q_1 = z,
    Q_{n+1} = (z Q_n^2 + 4 (Q_n'^2 - Q_n Q_n'')) / Q_{n-1};

    the division is exact (checked, remainder must vanish).  Q_2 = z^3 + 4,
    Q_3 = z^6 + 20 z^3 - 80.
    """
    if n < 0 or n != int(n):
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    z = Polynomial([0.0, 1.0])
    q_prev, q_cur = Polynomial([1.0]), z
    if n == 0:
        return q_prev
    for _ in range(1, int(n)):
        dq = q_cur.deriv()
        num = z * q_cur ** 2 + 4.0 * (dq ** 2 - q_cur * q_cur.deriv(2))
        q_next, rem = divmod(num, q_prev)
        if np.max(np.abs(rem.coef)) > 1e-9 * max(1.0, np.max(np.abs(num.coef))):
            raise ArithmeticError(f"Yablonskii-Vorob'ev division left a remainder at n={n}")
        q_prev, q_cur = q_cur, q_next
    return q_cur


def pii_exact_rational(delta: int, z) -> np.ndarray | float:
    """Exact rational PII solution q = d/dz log(Q_{n-1} / Q_n) for delta = n.

    Supported delta: -2, -1, 0, 1, 2 (0 gives the zero solution; negative
    delta uses the symmetry q -> -q).  Raises PoleError when z is within
    1e-12 of a zero of either polynomial.
    """
    if delta not in (-2, -1, 0, 1, 2):
        raise ValueError(f"delta must be an integer in [-2, 2], got {delta!r}")
    scalar = np.isscalar(z)
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    if delta == 0:
        out = np.zeros_like(zs)
        return float(out[0]) if scalar else out
    n = abs(int(delta))
    q_nm1 = yablonskii_vorobev(n - 1)
    q_n = yablonskii_vorobev(n)
    den1, den2 = q_nm1(zs), q_n(zs)
    for den, which in ((den1, n - 1), (den2, n)):
        bad = np.abs(den) < _POLE_TOL
        if np.any(bad):
            raise PoleError(f"z = {zs[bad][0]!r} is a zero of Q_{which} (pole of the rational solution)")
    out = q_nm1.deriv()(zs) / den1 - q_n.deriv()(zs) / den2
    if delta < 0:
        out = -out
    return float(out[0]) if scalar else out


def airy_type_solution(z_grid, phi0: float = 1.0, dphi0: float = -1.0) -> np.ndarray:
    """Reference delta = 1/2 solution q = -phi'/phi with phi'' + (z/2) phi = 0.

    phi is integrated from z_grid[0] with a high-accuracy adaptive scheme
    (DOP853, rtol 1e-12), independent of the fixed-step PII integrator, so
    the two can check each other.  Raises PoleError if phi vanishes (to
    within 1e-8 of its max) anywhere on the grid: a zero of phi is a pole
    of q, and the caller should pick a pole-free window.
    """
    z_grid = np.asarray(z_grid, dtype=float)
    if z_grid.ndim != 1 or z_grid.size < 2:
        raise ValueError("z_grid must be 1-D with at least two points")

    def rhs(z, y):
        return [y[1], -0.5 * z * y[0]]

    sol = solve_ivp(
        rhs,
        (z_grid[0], z_grid[-1]),
        [phi0, dphi0],
        method="DOP853",
        t_eval=z_grid,
        rtol=1e-12,
        atol=1e-14,
    )
    if not sol.success:
        raise RuntimeError(f"companion integration failed: {sol.message}")
    phi, dphi = sol.y
    sign_change = np.any(np.sign(phi[1:]) * np.sign(phi[:-1]) <= 0)
    if sign_change or np.min(np.abs(phi)) < 1e-8 * np.max(np.abs(phi)):
        z_bad = z_grid[int(np.argmin(np.abs(phi)))]
        raise PoleError(f"phi vanishes near z = {z_bad:.6g}; q has a pole in this window")
    return -dphi / phi
