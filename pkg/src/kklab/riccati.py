"""Momentum-parameter dynamics under linear growth and quadratic damping.

The deterministic evolution of the soliton momentum parameter is the
Riccati equation

    dk/dt = alpha(t) k - (4/5) beta k^2,

whose closed form follows from the Bernoulli substitution w = 1/k:

    k(t) = k0 exp(G(t)) / (1 + (4/5) beta k0 F(t)),
    G(t) = int_0^t alpha(s) ds,   F(t) = int_0^t exp(G(s)) ds,

with the first-order-in-beta expansion k0 e^G (1 - (4/5) beta k0 F).
Three alpha inputs are accepted: a constant, a callable of t, or a sampled
path (t_nodes, values) interpolated linearly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .numerics import rk4_solve

__all__ = [
    "RiccatiModel",
    "BlowupError",
    "FiniteTimeSingularityError",
    "ExpansionOutOfRangeWarning",
    "riccati_rhs",
    "solve_riccati_numeric",
    "riccati_closed_form",
    "riccati_perturbative",
    "damping_fixed_point",
]

#: |k| beyond which a numeric trajectory is declared blown up
BLOWUP_THRESHOLD = 1e12

#: validity bound for the first-order expansion: (4/5) beta |k0| F(t) below this
EXPANSION_VALIDITY = 0.5

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=200)


class BlowupError(RuntimeError):
    """Numeric trajectory left |k| <= 1e12; carries the estimated blowup time."""

    def __init__(self, blowup_time: float):
        super().__init__(f"trajectory blew up near t = {blowup_time:.6g}")
        self.blowup_time = blowup_time


class FiniteTimeSingularityError(ArithmeticError):
    """Closed-form denominator 1 + (4/5) beta k0 F(t) is not positive."""


class ExpansionOutOfRangeWarning(UserWarning):
    """First-order expansion evaluated outside its validity bound."""


class _Alpha:
    """Uniform view of the growth coefficient: value, G(t), F(t)."""

    def __init__(self, spec):
        self._spec = spec
        if callable(spec):
            self._kind = "callable"
        elif np.isscalar(spec):
            a = float(spec)
            if not np.isfinite(a):
                raise ValueError(f"alpha must be finite, got {spec!r}")
            self._kind = "constant"
            self._a = a
        else:
            t_nodes, values = spec
            t_nodes = np.asarray(t_nodes, dtype=float)
            values = np.asarray(values, dtype=float)
            if t_nodes.ndim != 1 or t_nodes.shape != values.shape or t_nodes.size < 2:
                raise ValueError("sampled alpha needs matching 1-D (t_nodes, values) with >= 2 nodes")
            if not np.all(np.diff(t_nodes) > 0):
                raise ValueError("sampled alpha t_nodes must be strictly increasing")
            if not (np.all(np.isfinite(t_nodes)) and np.all(np.isfinite(values))):
                raise ValueError("sampled alpha contains non-finite entries")
            self._kind = "sampled"
            self._t = t_nodes
            self._v = values
            # cumulative exact integral of the piecewise-linear interpolant
            seg = 0.5 * (values[1:] + values[:-1]) * np.diff(t_nodes)
            self._cum = np.concatenate([[0.0], np.cumsum(seg)])

    def value(self, t: float) -> float:
        if self._kind == "constant":
            return self._a
        if self._kind == "callable":
            v = float(self._spec(t))
            if not np.isfinite(v):
                raise ValueError(f"alpha({t}) is not finite")
            return v
        return float(np.interp(t, self._t, self._v))

    def growth_exponent(self, t: float) -> float:
        """G(t) = int_0^t alpha."""
        if self._kind == "constant":
            return self._a * t
        if self._kind == "callable":
            val, _ = integrate.quad(self._spec, 0.0, t, **_QUAD_OPTS)
            return val
        # exact for the piecewise-linear interpolant, constant-extended ends
        tt = self._t
        if t <= tt[0]:
            return self._cum[0] + self._v[0] * (t - tt[0]) + self._seg_zero_offset()
        i = int(np.searchsorted(tt, t, side="right") - 1)
        i = min(i, tt.size - 2)
        if t >= tt[-1]:
            base = self._cum[-1] + self._v[-1] * (t - tt[-1])
        else:
            dt = t - tt[i]
            slope = (self._v[i + 1] - self._v[i]) / (tt[i + 1] - tt[i])
            base = self._cum[i] + self._v[i] * dt + 0.5 * slope * dt * dt
        return base + self._seg_zero_offset()

    def _seg_zero_offset(self) -> float:
        # shift so that G(0) = 0 even when the sample grid does not start at 0
        tt = self._t
        if tt[0] <= 0.0 <= tt[-1]:
            i = int(np.searchsorted(tt, 0.0, side="right") - 1)
            i = min(max(i, 0), tt.size - 2)
            dt = -tt[i]
            slope = (self._v[i + 1] - self._v[i]) / (tt[i + 1] - tt[i])
            return -(self._cum[i] + self._v[i] * dt + 0.5 * slope * dt * dt)
        if tt[0] > 0.0:
            return -self._v[0] * (0.0 - tt[0])
        return -(self._cum[-1] + self._v[-1] * (0.0 - tt[-1]))

    def growth_integral(self, t: float) -> float:
        """F(t) = int_0^t exp(G(s)) ds."""
        if self._kind == "constant":
            a = self._a
            if a == 0.0:
                return t
            return float(np.expm1(a * t) / a)
        val, _ = integrate.quad(lambda s: np.exp(self.growth_exponent(s)), 0.0, t, **_QUAD_OPTS)
        return val


@dataclass(frozen=True)
class RiccatiModel:
    """Growth coefficient alpha, damping beta >= 0, initial momentum parameter k0."""

    alpha: float | Callable[[float], float] | tuple[Sequence[float], Sequence[float]]
    beta: float
    k0: float

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValueError(f"beta must be finite and >= 0, got {self.beta!r}")
        if not np.isfinite(self.k0):
            raise ValueError(f"k0 must be finite, got {self.k0!r}")
        object.__setattr__(self, "_alpha_view", _Alpha(self.alpha))

    @property
    def alpha_view(self) -> _Alpha:
        return self._alpha_view  # type: ignore[attr-defined]


def riccati_rhs(k: float, alpha_value: float, beta: float) -> float:
    """dk/dt = alpha k - (4/5) beta k^2."""
    return alpha_value * k - 0.8 * beta * k * k


def solve_riccati_numeric(model: RiccatiModel, t_grid, n_steps: int = 10000) -> np.ndarray:
    """Fixed-step RK4 trajectory sampled on t_grid (t_grid[0] must be 0).

    n_steps substeps are spread across the grid; raises BlowupError once
    |k| exceeds 1e12 or the state stops being finite.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[0] != 0.0:
        raise ValueError("t_grid must start at 0")
    av = model.alpha_view
    beta = model.beta

    def f(t, y):
        return np.array([riccati_rhs(y[0], av.value(t), beta)])

    def guard(t, y):
        if not np.isfinite(y[0]) or abs(y[0]) > BLOWUP_THRESHOLD:
            raise BlowupError(t)

    out = rk4_solve(f, np.array([model.k0]), t_grid, n_steps, callback=guard)
    return out[:, 0]


def riccati_closed_form(model: RiccatiModel, t) -> np.ndarray | float:
    """Exact solution k0 e^G / (1 + (4/5) beta k0 F); scalar or array t.

    Raises FiniteTimeSingularityError where the denominator is <= 0
    (possible for k0 < 0), naming the offending time.
    """
    av = model.alpha_view
    scalar = np.isscalar(t)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(ts)
    for i, ti in enumerate(ts):
        g = av.growth_exponent(ti)
        f_int = av.growth_integral(ti)
        denom = 1.0 + 0.8 * model.beta * model.k0 * f_int
        if denom <= 0.0:
            raise FiniteTimeSingularityError(
                f"closed-form denominator {denom:.6g} <= 0 at t = {ti:.6g} (finite-time singularity)"
            )
        out[i] = model.k0 * np.exp(g) / denom
    return float(out[0]) if scalar else out


def riccati_perturbative(model: RiccatiModel, t) -> np.ndarray | float:
    """First-order-in-beta solution k0 e^G (1 - (4/5) beta k0 F).

    Warns with ExpansionOutOfRangeWarning when (4/5) beta |k0| F(t) >= 0.5
    anywhere on t (the expansion parameter is no longer small); the value is
    still returned.
    """
    av = model.alpha_view
    scalar = np.isscalar(t)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(ts)
    worst = 0.0
    for i, ti in enumerate(ts):
        g = av.growth_exponent(ti)
        f_int = av.growth_integral(ti)
        x = 0.8 * model.beta * model.k0 * f_int
        worst = max(worst, 0.8 * model.beta * abs(model.k0) * abs(f_int))
        out[i] = model.k0 * np.exp(g) * (1.0 - x)
    if worst >= EXPANSION_VALIDITY:
        warnings.warn(
            f"first-order expansion outside validity: (4/5) beta |k0| F = {worst:.3g} >= {EXPANSION_VALIDITY}",
            ExpansionOutOfRangeWarning,
            stacklevel=2,
        )
    return float(out[0]) if scalar else out


def damping_fixed_point(alpha_value: float, beta: float) -> float:
    """Stationary momentum parameter k* = 5 alpha / (4 beta) of the constant-alpha flow."""
    if beta <= 0:
        raise ValueError("fixed point requires beta > 0")
    return 1.25 * alpha_value / beta
