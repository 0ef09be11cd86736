"""Small shared numerical kernels: fixed-step RK4 and streaming moments.

Deliberately fixed-step (no adaptivity, no error control): every consumer in
this package wants bit-reproducible trajectories whose cost is known up
front, and convergence is checked against closed forms in the tests rather
than delegated to an adaptive controller.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["rk4_step", "rk4_solve", "RunningMoments"]


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of size h for y' = f(t, y)."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def rk4_solve(
    f: Callable[[float, np.ndarray], np.ndarray],
    y0: np.ndarray,
    t_grid: np.ndarray,
    n_steps: int,
    callback: Callable[[float, np.ndarray], None] | None = None,
) -> np.ndarray:
    """Integrate y' = f(t, y) with fixed-step RK4, sampling on t_grid.

    Parameters
    ----------
    f : callable
        Right-hand side, called as f(t, y) with y an ndarray.
    y0 : array_like
        Initial state at t_grid[0].
    t_grid : array_like
        Strictly increasing sample times.  The integrator lands on every
        grid time exactly; n_steps total substeps are distributed over the
        intervals proportionally to their length (at least one each).
    n_steps : int
        Total substep budget across the whole grid.
    callback : callable, optional
        Invoked as callback(t, y) after every substep; may raise to abort.

    Returns
    -------
    ndarray of shape (len(t_grid),) + y0.shape with the sampled states.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2:
        raise ValueError("t_grid must be 1-D with at least two times")
    if not np.all(np.diff(t_grid) > 0):
        raise ValueError("t_grid must be strictly increasing")
    y = np.asarray(y0, dtype=float).copy()
    span = t_grid[-1] - t_grid[0]
    out = np.empty((t_grid.size,) + y.shape, dtype=float)
    out[0] = y
    for i in range(t_grid.size - 1):
        dt_i = t_grid[i + 1] - t_grid[i]
        m = max(1, int(round(n_steps * dt_i / span)))
        h = dt_i / m
        t = t_grid[i]
        for _ in range(m):
            y = rk4_step(f, t, y, h)
            t += h
            if callback is not None:
                callback(t, y)
        out[i + 1] = y
    return out


class RunningMoments:
    """Streaming mean / second central moment with exact pairwise combine.

    Accumulates (count, mean, M2) per slot over vectors of samples and
    combines partial accumulators with the Chan update, so a blocked or
    threaded reduction gives the same bits as long as partials are combined
    in a fixed order.
    """

    def __init__(self, shape: tuple[int, ...]):
        self.count = 0
        self.mean = np.zeros(shape)
        self.m2 = np.zeros(shape)

    def add_batch(self, samples: np.ndarray, axis: int = 0) -> None:
        """Fold in a batch of samples along `axis` (one shot, not looping)."""
        n_b = samples.shape[axis]
        if n_b == 0:
            return
        mean_b = samples.mean(axis=axis)
        m2_b = np.square(samples - np.expand_dims(mean_b, axis)).sum(axis=axis)
        self._combine(n_b, mean_b, m2_b)

    def merge(self, other: "RunningMoments") -> None:
        self._combine(other.count, other.mean, other.m2)

    def _combine(self, n_b: int, mean_b: np.ndarray, m2_b: np.ndarray) -> None:
        n_a = self.count
        n = n_a + n_b
        if n_a == 0:
            self.count, self.mean, self.m2 = n_b, np.array(mean_b, dtype=float), np.array(m2_b, dtype=float)
            return
        delta = mean_b - self.mean
        self.mean = self.mean + delta * (n_b / n)
        self.m2 = self.m2 + m2_b + np.square(delta) * (n_a * n_b / n)
        self.count = n

    def standard_error(self) -> np.ndarray:
        """Standard error of the mean, sample-std / sqrt(n)."""
        if self.count < 2:
            return np.full_like(self.mean, np.nan)
        return np.sqrt(self.m2 / (self.count - 1)) / np.sqrt(self.count)
