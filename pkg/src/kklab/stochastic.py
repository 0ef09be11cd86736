"""White-noise growth of the momentum parameter: SDE paths and ensembles.

The growth coefficient is alpha0 + noise with correlator
<noise(t1) noise(t2)> = 2 sigma^2 delta(t1 - t2), so a step of size dt
carries a Gaussian increment of variance 2 sigma^2 dt.  Two stepping
conventions are provided and kept strictly apart:

* ``ito``: Euler-Maruyama,
  k_{n+1} = k_n + (alpha0 k_n - (4/5) beta k_n^2) dt + k_n dW_n
* ``stratonovich``: stochastic Heun (predictor-corrector, trapezoidal in
  both drift and noise).

Reproducibility is part of the contract: path j of a run with seed s draws
from a counter-based generator keyed on (s, j), so any subset of paths can
be regenerated in isolation, and ensemble statistics combine fixed-size
path blocks in index order, which makes them independent of thread count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoiseModel",
    "SdePath",
    "EnsembleStats",
    "DegenerateEnsembleError",
    "MomentBreakdownWarning",
    "LinearizedRegimeWarning",
    "sample_path",
    "integrate_sde",
    "ensemble_moments",
    "second_moment_closed_form",
    "second_moment_linearized",
]

import warnings

#: |k| beyond which a path is marked blown up and frozen
BLOWUP_THRESHOLD = 1e12

#: paths per block in ensemble reductions; fixed so that float summation
#: order (and hence the output bits) does not depend on scheduling
BLOCK_SIZE = 2048

_MASK64 = (1 << 64) - 1


class DegenerateEnsembleError(RuntimeError):
    """Every path in the ensemble blew up before the end of the horizon."""


class MomentBreakdownWarning(UserWarning):
    """Closed-form second moment went non-positive (formula out of range)."""


class LinearizedRegimeWarning(UserWarning):
    """Linearized second moment evaluated outside sigma^2 t << 1."""


@dataclass(frozen=True)
class NoiseModel:
    """Noise strength sigma^2, deterministic offset alpha0, stepping convention.

    dt is the step size used both for sampling increments and for stepping;
    a path's time grid must have exactly this spacing.
    """

    sigma2: float
    alpha0: float = 0.0
    convention: str = "ito"
    seed: int = 0
    dt: float = 1e-3

    def __post_init__(self):
        if not np.isfinite(self.sigma2) or self.sigma2 < 0:
            raise ValueError(f"sigma2 must be finite and >= 0, got {self.sigma2!r}")
        if not np.isfinite(self.alpha0):
            raise ValueError(f"alpha0 must be finite, got {self.alpha0!r}")
        if self.convention not in ("ito", "stratonovich"):
            raise ValueError(f"convention must be 'ito' or 'stratonovich', got {self.convention!r}")
        if not np.isfinite(self.dt) or self.dt <= 0:
            raise ValueError(f"dt must be finite and > 0, got {self.dt!r}")
        if not isinstance(self.seed, (int, np.integer)):
            raise ValueError(f"seed must be an integer, got {self.seed!r}")


@dataclass(frozen=True)
class SdePath:
    """One trajectory: values on the time grid plus blowup bookkeeping."""

    t_grid: np.ndarray
    k: np.ndarray
    blown_up: bool
    blowup_time: float | None


@dataclass(frozen=True)
class EnsembleStats:
    """Per-time mean and second raw moment of k with standard errors."""

    t_grid: np.ndarray
    mean_k: np.ndarray
    mean_k2: np.ndarray
    se_k: np.ndarray
    se_k2: np.ndarray
    n_paths: int
    survived_paths: int


def _path_generator(seed: int, path_index: int) -> np.random.Generator:
    key = np.array([seed & _MASK64, path_index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _check_grid(noise: NoiseModel, t_grid: np.ndarray) -> int:
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2:
        raise ValueError("t_grid must be 1-D with at least two times")
    steps = np.diff(t_grid)
    if not np.allclose(steps, noise.dt, rtol=1e-9, atol=0.0):
        raise ValueError(f"t_grid spacing must equal noise dt = {noise.dt}")
    return t_grid.size - 1


def _raw_increments(noise: NoiseModel, path_index: int, n_steps: int) -> np.ndarray:
    gen = _path_generator(noise.seed, path_index)
    return gen.normal(0.0, np.sqrt(2.0 * noise.sigma2 * noise.dt), n_steps)


def sample_path(noise: NoiseModel, path_index: int, t_grid) -> np.ndarray:
    """Increments of the integrated growth coefficient over each step.

    Returns alpha0 dt + dW per interval of t_grid (length len(t_grid) - 1),
    with dW ~ N(0, 2 sigma^2 dt).  sigma2 = 0 gives the deterministic
    increments exactly.  The stream depends only on (seed, path_index).
    """
    n_steps = _check_grid(noise, t_grid)
    return noise.alpha0 * noise.dt + _raw_increments(noise, path_index, n_steps)


def _advance(k: np.ndarray, dw: np.ndarray, noise: NoiseModel, beta: float) -> np.ndarray:
    """One step of the configured scheme, vectorized over paths."""
    a0, dt = noise.alpha0, noise.dt
    if noise.convention == "ito":
        return k + (a0 * k - 0.8 * beta * k * k) * dt + k * dw
    drift0 = a0 * k - 0.8 * beta * k * k
    pred = k + drift0 * dt + k * dw
    drift1 = a0 * pred - 0.8 * beta * pred * pred
    return k + 0.5 * (drift0 + drift1) * dt + 0.5 * (k + pred) * dw


def _step_block(k: np.ndarray, dw: np.ndarray, noise: NoiseModel, beta: float, blown: np.ndarray) -> None:
    """Advance a block in place, freezing blown-up paths at their last value."""
    adv = _advance(k, dw, noise, beta)
    bad = ~np.isfinite(adv)
    if bad.any():
        adv = np.where(bad, k, adv)
    np.copyto(k, adv, where=~blown)
    newly = ~blown & ((np.abs(k) > BLOWUP_THRESHOLD) | bad)
    blown |= newly


def integrate_sde(noise: NoiseModel, beta: float, k0: float, t_grid, path_index: int = 0) -> SdePath:
    """Integrate one path of dk = (alpha0 + noise) k dt - (4/5) beta k^2 dt.

    Paths crossing |k| > 1e12 (or going non-finite) are marked blown up and
    frozen at the last admissible value for the rest of the horizon; no
    exception is raised for a single path.
    """
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and >= 0, got {beta!r}")
    if not np.isfinite(k0):
        raise ValueError(f"k0 must be finite, got {k0!r}")
    t_grid = np.asarray(t_grid, dtype=float)
    n_steps = _check_grid(noise, t_grid)
    dw = _raw_increments(noise, path_index, n_steps)
    k = np.array([float(k0)])
    blown = np.array([abs(k0) > BLOWUP_THRESHOLD])
    out = np.empty(n_steps + 1)
    out[0] = k[0]
    blowup_time = t_grid[0] if blown[0] else None
    for n in range(n_steps):
        _step_block(k, dw[n : n + 1], noise, beta, blown)
        out[n + 1] = k[0]
        if blown[0] and blowup_time is None:
            blowup_time = t_grid[n + 1]
    return SdePath(t_grid=t_grid, k=out, blown_up=bool(blown[0]), blowup_time=blowup_time)


def _block_partial(noise, beta, k0, t_grid, n_steps, start, stop):
    """Per-time (count, mean, M2) for k and k^2 over paths [start, stop)."""
    nb = stop - start
    dw = np.empty((nb, n_steps))
    for j in range(nb):
        dw[j] = _raw_increments(noise, start + j, n_steps)
    k = np.full(nb, float(k0))
    blown = np.abs(k) > BLOWUP_THRESHOLD
    n_times = n_steps + 1
    mean_k = np.empty(n_times)
    m2_k = np.empty(n_times)
    mean_k2 = np.empty(n_times)
    m2_k2 = np.empty(n_times)

    def record(i):
        mu = k.mean()
        mean_k[i] = mu
        m2_k[i] = np.square(k - mu).sum()
        ksq = k * k
        mu2 = ksq.mean()
        mean_k2[i] = mu2
        m2_k2[i] = np.square(ksq - mu2).sum()

    record(0)
    for n in range(n_steps):
        _step_block(k, dw[:, n], noise, beta, blown)
        record(n + 1)
    survived = int(nb - blown.sum())
    return nb, mean_k, m2_k, mean_k2, m2_k2, survived


def _chan_combine(acc, part):
    n_a, mean_a, m2_a = acc
    n_b, mean_b, m2_b = part
    n = n_a + n_b
    delta = mean_b - mean_a
    mean = mean_a + delta * (n_b / n)
    m2 = m2_a + m2_b + np.square(delta) * (n_a * n_b / n)
    return n, mean, m2


def ensemble_moments(
    noise: NoiseModel,
    beta: float,
    k0: float,
    t_grid,
    n_paths: int,
    n_jobs: int = 1,
) -> EnsembleStats:
    """Monte Carlo moments of k over n_paths independent paths.

    Parameters
    ----------
    noise : NoiseModel
        Noise strength, convention, seed and step size.  t_grid spacing
        must equal noise.dt.
    beta : float
        Damping coefficient, >= 0.
    k0 : float
        Common initial value.
    t_grid : array_like
        Sample times (every step is a sample).
    n_paths : int
        Ensemble size, >= 100.
    n_jobs : int
        Worker threads over path blocks.  Results are bit-identical for any
        value: blocks are fixed-size and partials combine in block order.

    Returns
    -------
    EnsembleStats.  Blown-up paths stay in the statistics at their frozen
    value and are excluded only from ``survived_paths``; if no path
    survives, DegenerateEnsembleError is raised.
    """
    if n_paths < 100:
        raise ValueError(f"n_paths must be >= 100, got {n_paths}")
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and >= 0, got {beta!r}")
    if not np.isfinite(k0):
        raise ValueError(f"k0 must be finite, got {k0!r}")
    t_grid = np.asarray(t_grid, dtype=float)
    n_steps = _check_grid(noise, t_grid)
    bounds = [(s, min(s + BLOCK_SIZE, n_paths)) for s in range(0, n_paths, BLOCK_SIZE)]

    def work(b):
        return _block_partial(noise, beta, k0, t_grid, n_steps, *b)

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            partials = list(pool.map(work, bounds))
    else:
        partials = [work(b) for b in bounds]

    acc_k = (0, np.zeros(n_steps + 1), np.zeros(n_steps + 1))
    acc_k2 = (0, np.zeros(n_steps + 1), np.zeros(n_steps + 1))
    survived = 0
    for nb, mean_k, m2_k, mean_k2, m2_k2, surv in partials:  # block order fixed
        acc_k = _chan_combine(acc_k, (nb, mean_k, m2_k))
        acc_k2 = _chan_combine(acc_k2, (nb, mean_k2, m2_k2))
        survived += surv
    if survived == 0:
        raise DegenerateEnsembleError(f"all {n_paths} paths blew up before t = {t_grid[-1]:.6g}")
    n = acc_k[0]
    se_k = np.sqrt(acc_k[2] / (n - 1)) / np.sqrt(n)
    se_k2 = np.sqrt(acc_k2[2] / (n - 1)) / np.sqrt(n)
    return EnsembleStats(
        t_grid=t_grid,
        mean_k=acc_k[1],
        mean_k2=acc_k2[1],
        se_k=se_k,
        se_k2=se_k2,
        n_paths=n_paths,
        survived_paths=survived,
    )


def second_moment_closed_form(sigma2: float, beta: float, k0: float, t) -> np.ndarray | float:
    """Closed-form Ito second moment with first-order damping correction.

    E[k^2](t) = k0^2 e^{2 s t} [1 - (4/5) (beta k0 / s) (e^{2 s t} - 1)],
    s = sigma^2, with the s -> 0 limit k0^2 (1 - (8/5) beta k0 t).  Values
    where the damping bracket turns non-positive trigger
    MomentBreakdownWarning (the first-order correction has left its range);
    they are returned unclipped.
    """
    scalar = np.isscalar(t)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if abs(sigma2) < 1e-12:
        bracket = 1.0 - 1.6 * beta * k0 * ts
        out = k0 * k0 * bracket
    else:
        growth = np.exp(2.0 * sigma2 * ts)
        bracket = 1.0 - 0.8 * (beta * k0 / sigma2) * (growth - 1.0)
        out = k0 * k0 * growth * bracket
    if np.any(bracket <= 0.0):
        warnings.warn(
            "closed-form second moment bracket went non-positive; first-order damping out of range",
            MomentBreakdownWarning,
            stacklevel=2,
        )
    return float(out[0]) if scalar else out


def second_moment_linearized(sigma2: float, beta: float, k0: float, t) -> np.ndarray | float:
    """Short-time linearization E[k^2] ~= k0^2 [1 + 2 (sigma^2 - (4/5) beta k0) t].

    Warns with LinearizedRegimeWarning when sigma^2 t >= 1 anywhere (the
    linearization premise has failed); values are still returned.
    """
    scalar = np.isscalar(t)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(sigma2 * ts >= 1.0):
        warnings.warn(
            "linearized second moment evaluated with sigma^2 t >= 1",
            LinearizedRegimeWarning,
            stacklevel=2,
        )
    out = k0 * k0 * (1.0 + 2.0 * (sigma2 - 0.8 * beta * k0) * ts)
    return float(out[0]) if scalar else out
