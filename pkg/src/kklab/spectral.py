"""Fourier pseudospectral solver for the perturbed fifth-order flow

    u_t + 4 u^2 u_x - (75/2) u_x u_xx - 15 u u_xxx + u_xxxxx
        = alpha(t) u + beta u_xx

on a periodic box, with momentum-balance diagnostics that hold as an exact
identity for any field: with P = sum u^2 dx,

    dP/dt = 2 alpha sum u^2 dx - 2 beta sum u_x^2 dx - (15/2) sum u_x^3 dx.

The cubic-flux term is the full contribution of the conservative terms to
dP/dt (re-derived by integration by parts: the quartic and fifth-derivative
terms are perfect derivatives, and the u_x u_xx / u u_xxx pair leaves
exactly -(15/2) u_x^3 under the integral), so the residual of this law is a
solver invariant; it does not rely on the field being a soliton.

The stiff u_xxxxx term is handled exactly inside an exponential propagator;
the two schemes are an integrating-factor RK4 and ETDRK4 with contour-
quadrature coefficients.  Time-dependent alpha is frozen per step, so noise
paths enter as piecewise-constant gain.
"""

from __future__ import annotations

import functools
import warnings
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from numpy.fft import irfft, rfft, rfftfreq

__all__ = [
    "Grid",
    "PdeState",
    "PdeConfig",
    "PdeTrajectory",
    "Diagnostics",
    "DivergedStateError",
    "PhaseResolutionWarning",
    "spectral_derivative",
    "kk_rhs",
    "step",
    "momentum_balance_residual",
    "run_pde",
    "traveling_wave_residual",
]

from .soliton import SolitonParams, soliton_profile

#: contour-quadrature points for the ETDRK4 phi-coefficients
_CONTOUR_POINTS = 32


class DivergedStateError(RuntimeError):
    """Field went non-finite; carries the last valid time when known."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


class PhaseResolutionWarning(UserWarning):
    """Fastest nonlinearly coupled mode wraps its phase within one step.

    The exponential propagator is still exact and stable; only the reported
    phase of those modes is unresolved by the step size.  Modes beyond the
    dealiasing cut never feed back and are not counted.
    """


@dataclass(frozen=True)
class Grid:
    """Periodic domain [-L/2, L/2) sampled at N (power of two) points."""

    length: float
    n: int

    def __post_init__(self):
        if not np.isfinite(self.length) or self.length <= 0:
            raise ValueError(f"length must be finite and > 0, got {self.length!r}")
        if self.n < 64 or (self.n & (self.n - 1)) != 0:
            raise ValueError(f"n must be a power of two >= 64, got {self.n!r}")

    @property
    def dx(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        return -0.5 * self.length + self.dx * np.arange(self.n)

    @property
    def kappa(self) -> np.ndarray:
        """Non-negative wavenumbers of the real FFT, 2 pi j / L."""
        return 2.0 * np.pi * rfftfreq(self.n, d=self.dx)

    def integral(self, field: np.ndarray) -> float:
        """Rectangle-rule integral, exact for periodic band-limited fields."""
        return float(np.sum(field) * self.dx)


@functools.lru_cache(maxsize=32)
def _mode_arrays(n: int, length: float):
    """(kappa, d1, d2, d3, d5, dealias mask) for the rfft layout.

    Odd-order multipliers zero the Nyquist mode (its odd derivative has no
    consistent real representation); even orders keep it.
    """
    kappa = 2.0 * np.pi * rfftfreq(n, d=length / n)
    ik = 1j * kappa
    d1 = ik.copy()
    d3 = ik ** 3
    d5 = ik ** 5
    d1[-1] = 0.0
    d3[-1] = 0.0
    d5[-1] = 0.0
    d2 = -(kappa ** 2)
    mask = (np.arange(kappa.size) <= n // 3).astype(float)
    return kappa, d1, d2, d3, d5, mask


def spectral_derivative(u: np.ndarray, grid: Grid, order: int) -> np.ndarray:
    """order-th spatial derivative via the FFT multipliers."""
    if order not in (1, 2, 3, 5):
        raise ValueError(f"unsupported derivative order {order!r}")
    _, d1, d2, d3, d5, _ = _mode_arrays(grid.n, grid.length)
    mult = {1: d1, 2: d2, 3: d3, 5: d5}[order]
    return irfft(mult * rfft(u), n=grid.n)


@dataclass(frozen=True)
class Diagnostics:
    """Momentum and companion integrals of one state, freshly recomputed."""

    momentum: float
    grad2: float
    cubic_flux: float
    mass: float


@dataclass(frozen=True)
class PdeState:
    """Time plus real field on the grid."""

    t: float
    u: np.ndarray

    def diagnostics(self, grid: Grid) -> Diagnostics:
        ux = spectral_derivative(self.u, grid, 1)
        return Diagnostics(
            momentum=grid.integral(self.u ** 2),
            grad2=grid.integral(ux ** 2),
            cubic_flux=grid.integral(ux ** 3),
            mass=grid.integral(self.u),
        )


@dataclass(frozen=True)
class PdeConfig:
    """Scheme, step size, linear coefficients, and dealiasing policy.

    alpha may be a constant, a callable of t, or an array of per-step
    values (one per time step, consumed in order by run_pde: sample i
    applies over step i).  beta >= 0 damps; the nonlinear terms can be
    switched off to expose the exactly-solvable linear flow.
    """

    alpha: float | Callable[[float], float] | np.ndarray = 0.0
    beta: float = 0.0
    dt: float = 1e-4
    scheme: str = "etdrk4"
    dealias: bool = True
    include_nonlinear: bool = True

    def __post_init__(self):
        if not np.isfinite(self.beta) or self.beta < 0:
            raise ValueError(f"beta must be finite and >= 0, got {self.beta!r}")
        if not np.isfinite(self.dt) or self.dt == 0:
            raise ValueError(f"dt must be finite and nonzero, got {self.dt!r}")
        if self.scheme not in ("etdrk4", "ifrk4"):
            raise ValueError(f"scheme must be 'etdrk4' or 'ifrk4', got {self.scheme!r}")

    def alpha_at(self, t: float, step_index: int | None = None) -> float:
        a = self.alpha
        if callable(a):
            v = float(a(t))
        elif isinstance(a, np.ndarray):
            if step_index is None:
                raise ValueError("per-step alpha array needs a step index")
            if step_index >= a.size:
                raise ValueError(f"alpha path has {a.size} samples, step {step_index} requested")
            v = float(a[step_index])
        else:
            v = float(a)
        if not np.isfinite(v):
            raise ValueError(f"alpha at t={t} is not finite")
        return v


def _check_finite(u: np.ndarray, t: float | None) -> None:
    if not np.all(np.isfinite(u)):
        raise DivergedStateError(
            "field contains non-finite values" + (f" (last valid t = {t:.6g})" if t is not None else ""),
            t=t,
        )


def _nonlinear_hat(u_hat: np.ndarray, grid: Grid, dealias: bool) -> np.ndarray:
    """Spectral tendency of the conservative nonlinear terms.

    Derivatives spectrally, products pointwise in physical space, result
    transformed back; the 2/3-rule mask is applied both to the inputs of
    the products and to the product itself.
    """
    _, d1, _, d3, _, mask = _mode_arrays(grid.n, grid.length)
    uh = u_hat * mask if dealias else u_hat
    u = irfft(uh, n=grid.n)
    ux = irfft(d1 * uh, n=grid.n)
    uxx = irfft(d1 * d1 * uh, n=grid.n)
    uxxx = irfft(d3 * uh, n=grid.n)
    nl = -4.0 * u * u * ux + 37.5 * ux * uxx + 15.0 * u * uxxx
    nl_hat = rfft(nl)
    return nl_hat * mask if dealias else nl_hat


def kk_rhs(
    u: np.ndarray,
    grid: Grid,
    alpha_val: float,
    beta: float,
    dealias: bool = True,
    include_nonlinear: bool = True,
) -> np.ndarray:
    """Tendency u_t of the full flow for the instantaneous gain alpha_val.

    u_t = -4 u^2 u_x + (75/2) u_x u_xx + 15 u u_xxx - u_xxxxx
          + alpha_val u + beta u_xx
    """
    u = np.asarray(u, dtype=float)
    _check_finite(u, None)
    _, _, d2, _, d5, _ = _mode_arrays(grid.n, grid.length)
    uh = rfft(u)
    out_hat = -d5 * uh + beta * d2 * uh
    if include_nonlinear:
        out_hat = out_hat + _nonlinear_hat(uh, grid, dealias)
    return irfft(out_hat, n=grid.n) + alpha_val * u


@functools.lru_cache(maxsize=8)
def _propagator(n: int, length: float, dt: float, alpha_val: float, beta: float, scheme: str):
    """Exponential-integrator coefficient arrays for one (grid, step) setup.

    The linear symbol is L = -(i kappa)^5 + alpha - beta kappa^2 (complex).
    ETDRK4 phi-weights follow the contour-quadrature recipe: each is the
    mean over 32 points of the unit circle around L*dt, which is uniformly
    accurate through L -> 0 where the closed forms cancel catastrophically.
    """
    kappa, _, d2, _, d5, _ = _mode_arrays(n, length)
    lin = -d5 + alpha_val + beta * d2
    lh = lin * dt
    e_full = np.exp(lh)
    e_half = np.exp(lh / 2.0)
    theta = (np.arange(_CONTOUR_POINTS) + 0.5) * (2.0 * np.pi / _CONTOUR_POINTS)
    ring = np.exp(1j * theta)
    lr = lh[:, None] + ring[None, :]
    q = dt * np.mean((np.exp(lr / 2.0) - 1.0) / lr, axis=1)
    f1 = dt * np.mean((-4.0 - lr + np.exp(lr) * (4.0 - 3.0 * lr + lr ** 2)) / lr ** 3, axis=1)
    f2 = dt * np.mean((2.0 + lr + np.exp(lr) * (-2.0 + lr)) / lr ** 3, axis=1)
    f3 = dt * np.mean((-4.0 - 3.0 * lr - lr ** 2 + np.exp(lr) * (4.0 - lr)) / lr ** 3, axis=1)
    return e_full, e_half, q, f1, f2, f3


def _phase_guard(grid: Grid, config: PdeConfig) -> None:
    # Only modes that participate in the nonlinear coupling need their phase
    # resolved within a step; with dealiasing that band ends at the 2/3 cut.
    kappa, _, _, _, _, mask = _mode_arrays(grid.n, grid.length)
    if config.dealias:
        kappa = kappa * mask
    if config.include_nonlinear and abs(config.dt) * float(np.max(kappa)) ** 5 >= 2.0 * np.pi:
        warnings.warn(
            "dt * max|kappa|^5 >= 2*pi over the nonlinearly coupled band: "
            "fastest-mode phase wraps within one step (propagation stays exact; "
            "reported phase of those modes is unresolved)",
            PhaseResolutionWarning,
            stacklevel=3,
        )


def _advance_hat(u_hat: np.ndarray, grid: Grid, config: PdeConfig, alpha_val: float) -> np.ndarray:
    """One step of the configured scheme on the spectral state."""
    dt = config.dt
    e_full, e_half, q, f1, f2, f3 = _propagator(grid.n, grid.length, dt, alpha_val, config.beta, config.scheme)

    if not config.include_nonlinear:
        return e_full * u_hat

    def nl(v_hat):
        return _nonlinear_hat(v_hat, grid, config.dealias)

    if config.scheme == "etdrk4":
        n_v = nl(u_hat)
        a = e_half * u_hat + q * n_v
        n_a = nl(a)
        b = e_half * u_hat + q * n_a
        n_b = nl(b)
        c = e_half * a + q * (2.0 * n_b - n_v)
        n_c = nl(c)
        return e_full * u_hat + f1 * n_v + 2.0 * f2 * (n_a + n_b) + f3 * n_c

    # integrating-factor RK4: w = e^{-L t} u_hat obeys dw/dt = e^{-L t} N(e^{L t} w)
    a = nl(u_hat)
    b = nl(e_half * (u_hat + 0.5 * dt * a))
    c = nl(e_half * u_hat + 0.5 * dt * b)
    d = nl(e_full * u_hat + dt * e_half * c)
    return e_full * u_hat + (dt / 6.0) * (e_full * a + 2.0 * e_half * (b + c) + d)


def step(state: PdeState, config: PdeConfig, grid: Grid, step_index: int | None = None) -> PdeState:
    """Advance one step; alpha is resolved at the current time and frozen."""
    _check_finite(state.u, state.t)
    alpha_val = config.alpha_at(state.t, step_index)
    u_hat = rfft(state.u)
    # divergence is detected and raised below, so intermediate overflow
    # need not also warn
    with np.errstate(over="ignore", invalid="ignore"):
        new_hat = _advance_hat(u_hat, grid, config, alpha_val)
        u_new = irfft(new_hat, n=grid.n)
    if not np.all(np.isfinite(u_new)):
        raise DivergedStateError(f"step diverged (last valid t = {state.t:.6g})", t=state.t)
    return PdeState(t=state.t + config.dt, u=u_new)


def momentum_balance_residual(
    state: PdeState,
    alpha_val: float,
    beta: float,
    grid: Grid,
    dealias: bool = True,
    include_nonlinear: bool = True,
) -> float:
    """Residual of the momentum balance law for this state.

    R = 2 sum(u u_t) dx - [2 alpha sum u^2 - 2 beta sum u_x^2
        - (15/2) sum u_x^3] dx with u_t from kk_rhs.  An identity for any
    field; vanishes to quadrature accuracy regardless of what u is.
    """
    u = state.u
    ut = kk_rhs(u, grid, alpha_val, beta, dealias=dealias, include_nonlinear=include_nonlinear)
    ux = spectral_derivative(u, grid, 1)
    dpdt = 2.0 * grid.integral(u * ut)
    if include_nonlinear:
        expected = 2.0 * alpha_val * grid.integral(u ** 2) - 2.0 * beta * grid.integral(ux ** 2) - 7.5 * grid.integral(
            ux ** 3
        )
    else:
        expected = 2.0 * alpha_val * grid.integral(u ** 2) - 2.0 * beta * grid.integral(ux ** 2)
    return dpdt - expected


@dataclass(frozen=True)
class PdeTrajectory:
    """Sampled diagnostics of one run, plus optional field snapshots."""

    times: np.ndarray
    momentum: np.ndarray
    grad2: np.ndarray
    cubic_flux: np.ndarray
    mass: np.ndarray
    balance_residual: np.ndarray
    final_state: PdeState
    snapshots: tuple[PdeState, ...] = ()


def run_pde(
    initial: PdeState,
    config: PdeConfig,
    grid: Grid,
    t_final: float,
    sample_every: int = 1,
    store_snapshots: bool = False,
) -> PdeTrajectory:
    """March the flow to t_final, sampling diagnostics every sample_every steps.

    The step count is round(t_final / dt) and must land on t_final to 1e-9
    relative.  A per-step alpha array is consumed at exactly the step times
    (sample i over step i).  Divergence raises DivergedStateError carrying
    the last valid time.
    """
    if t_final <= 0:
        raise ValueError(f"t_final must be > 0, got {t_final!r}")
    if sample_every < 1:
        raise ValueError(f"sample_every must be >= 1, got {sample_every!r}")
    n_steps = int(round(t_final / config.dt))
    if n_steps < 1 or abs(n_steps * config.dt - t_final) > 1e-9 * max(1.0, abs(t_final)):
        raise ValueError(f"t_final = {t_final} is not an integer number of steps of dt = {config.dt}")
    if isinstance(config.alpha, np.ndarray) and config.alpha.size < n_steps:
        raise ValueError(f"alpha path has {config.alpha.size} samples but the run needs {n_steps}")
    _phase_guard(grid, config)

    state = initial
    times, mom, grad2, flux, mass, resid = [], [], [], [], [], []
    snaps: list[PdeState] = []

    def record(s: PdeState, idx: int) -> None:
        d = s.diagnostics(grid)
        a_here = config.alpha_at(s.t, min(idx, n_steps - 1))
        times.append(s.t)
        mom.append(d.momentum)
        grad2.append(d.grad2)
        flux.append(d.cubic_flux)
        mass.append(d.mass)
        resid.append(
            momentum_balance_residual(
                s, a_here, config.beta, grid, dealias=config.dealias, include_nonlinear=config.include_nonlinear
            )
        )
        if store_snapshots:
            snaps.append(s)

    record(state, 0)
    for i in range(n_steps):
        state = step(state, config, grid, step_index=i)
        # re-anchor time to avoid accumulated rounding over many steps
        state = PdeState(t=initial.t + (i + 1) * config.dt, u=state.u)
        if (i + 1) % sample_every == 0 or i == n_steps - 1:
            record(state, i + 1)
    return PdeTrajectory(
        times=np.asarray(times),
        momentum=np.asarray(mom),
        grad2=np.asarray(grad2),
        cubic_flux=np.asarray(flux),
        mass=np.asarray(mass),
        balance_residual=np.asarray(resid),
        final_state=state,
        snapshots=tuple(snaps),
    )


def traveling_wave_residual(params: SolitonParams, grid: Grid, t: float = 0.0) -> dict:
    """How well the sech^2 ansatz solves the unperturbed flow, measured.

    For a profile translating at speed -V (phase x + V t), an exact solution
    would satisfy u_t = V u_x, so the defect is kk_rhs(u) - V u_x with
    alpha = beta = 0.  Returns L2 and max norms of the defect alongside the
    same norms of u; recorded, not asserted (whether the printed
    parameterization solves the flow is exactly the open question this
    quantifies).
    """
    u = soliton_profile(params, grid.x, t)
    ut_pde = kk_rhs(u, grid, 0.0, 0.0, dealias=False)
    ux = spectral_derivative(u, grid, 1)
    defect = ut_pde - params.velocity * ux
    return {
        "defect_l2": float(np.sqrt(grid.integral(defect ** 2))),
        "defect_max": float(np.max(np.abs(defect))),
        "field_l2": float(np.sqrt(grid.integral(u ** 2))),
        "field_max": float(np.max(np.abs(u))),
    }
