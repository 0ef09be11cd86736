"""Figure renderers.

Five figure kinds, all file-to-file: read CSV columns, draw, save.  No
model quantity is computed here; if a curve is on a figure, the numbers
came out of an input file.

Rendering is deterministic: fixed style parameters, fixed color order,
and output metadata scrubbed of timestamps, so rendering the same CSV
twice produces byte-identical images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .reader import SchemaError, read_columns, require_columns

__all__ = ["FIGURE_KINDS", "FigureSpec", "render"]

_RC = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 110,
    "savefig.dpi": 150,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.6,
    "legend.framealpha": 0.9,
    "svg.hashsalt": "kkplots",
}

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

# documented header of the figure-data files written by the simulation CLI
_MOMENT_COLUMNS = ("t", "sigma2", "mean_k2", "se_k2", "paper_formula", "linearized_formula")

_METADATA = {
    ".png": {"Software": "kkplots"},
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None},
}


@dataclass(frozen=True)
class FigureSpec:
    """One rendering job: input CSVs, figure kind, labels, output path."""

    inputs: tuple[Path, ...]
    kind: str
    out: Path
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    labels: tuple[str, ...] = field(default=())

    def label_for(self, index: int) -> str:
        if index < len(self.labels):
            return self.labels[index]
        return Path(self.inputs[index]).stem


def _save(fig, spec: FigureSpec) -> None:
    suffix = Path(spec.out).suffix.lower()
    if suffix not in _METADATA:
        raise SchemaError(f"{spec.out}: unsupported output format '{suffix}' (use .png, .svg, or .pdf)")
    Path(spec.out).parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out, metadata=_METADATA[suffix])


def _single_input(spec: FigureSpec) -> Path:
    if len(spec.inputs) != 1:
        raise SchemaError(f"figure kind '{spec.kind}' takes exactly one input file, got {len(spec.inputs)}")
    return spec.inputs[0]


def _pivot_surface(path: Path) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Long-format (t, x, u) rows -> (t_axis, x_axis, u[nt, nx])."""
    table = read_columns(path)
    require_columns(table, ("t", "x", "u"), path)
    t_axis = np.unique(table["t"])
    x_axis = np.unique(table["x"])
    if t_axis.size * x_axis.size != table["u"].size:
        raise SchemaError(
            f"{path}: rows do not form a rectangular (t, x) grid: "
            f"{t_axis.size} x {x_axis.size} != {table['u'].size}"
        )
    order = np.lexsort((table["x"], table["t"]))
    u = table["u"][order].reshape(t_axis.size, x_axis.size)
    return t_axis, x_axis, u


def _render_surface(spec: FigureSpec) -> None:
    t_axis, x_axis, u = _pivot_surface(_single_input(spec))
    fig = plt.figure()
    ax = fig.add_subplot(projection="3d")
    xg, tg = np.meshgrid(x_axis, t_axis)
    ax.plot_surface(xg, tg, u, cmap="viridis", rstride=1, cstride=1, linewidth=0)
    ax.set_xlabel(spec.xlabel or "x")
    ax.set_ylabel("t")
    ax.set_zlabel(spec.ylabel or "u")
    ax.set_title(spec.title or "wave field")
    _save(fig, spec)
    plt.close(fig)


def _render_contour(spec: FigureSpec) -> None:
    t_axis, x_axis, u = _pivot_surface(_single_input(spec))
    fig, ax = plt.subplots()
    filled = ax.contourf(x_axis, t_axis, u, levels=21, cmap="viridis")
    fig.colorbar(filled, ax=ax, label=spec.ylabel or "u")
    ax.set_xlabel(spec.xlabel or "x")
    ax.set_ylabel("t")
    ax.set_title(spec.title or "wave field")
    _save(fig, spec)
    plt.close(fig)


def _render_slice(spec: FigureSpec) -> None:
    fig, ax = plt.subplots()
    for i, path in enumerate(spec.inputs):
        table = read_columns(path)
        require_columns(table, ("x", "u"), path)
        ax.plot(table["x"], table["u"], color=_COLORS[i % len(_COLORS)], label=spec.label_for(i))
    ax.set_xlabel(spec.xlabel or "x")
    ax.set_ylabel(spec.ylabel or "u")
    ax.set_title(spec.title or "profile")
    if len(spec.inputs) > 1:
        ax.legend()
    _save(fig, spec)
    plt.close(fig)


def _moment_groups(path: Path):
    table = read_columns(path)
    require_columns(table, _MOMENT_COLUMNS, path)
    for s2 in np.unique(table["sigma2"]):
        sel = table["sigma2"] == s2
        yield float(s2), {name: table[name][sel] for name in _MOMENT_COLUMNS}


def _render_moments(spec: FigureSpec) -> None:
    """Ensemble second moment vs time, one curve family per noise level.

    Solid: Monte Carlo mean with a 2 SE band.  Dashed: the closed-form
    moment curve.  Dotted: its short-time linearization.
    """
    fig, ax = plt.subplots()
    ci = 0
    for path in spec.inputs:
        for s2, cols in _moment_groups(path):
            color = _COLORS[ci % len(_COLORS)]
            ci += 1
            ax.plot(cols["t"], cols["mean_k2"], color=color, label=f"sigma^2 = {s2:g}")
            ax.fill_between(
                cols["t"],
                cols["mean_k2"] - 2.0 * cols["se_k2"],
                cols["mean_k2"] + 2.0 * cols["se_k2"],
                color=color,
                alpha=0.2,
                linewidth=0,
            )
            ax.plot(cols["t"], cols["paper_formula"], color=color, linestyle="--", linewidth=1.1)
            ax.plot(cols["t"], cols["linearized_formula"], color=color, linestyle=":", linewidth=1.1)
    ax.set_xlabel(spec.xlabel or "t")
    ax.set_ylabel(spec.ylabel or "second moment of k")
    ax.set_title(spec.title or "ensemble second moment (solid: MC, dashed: closed form, dotted: linearized)")
    ax.legend()
    _save(fig, spec)
    plt.close(fig)


def _render_lines(spec: FigureSpec) -> None:
    """Short-time window where every noise level is a straight line from k0^2."""
    fig, ax = plt.subplots()
    ci = 0
    for path in spec.inputs:
        for s2, cols in _moment_groups(path):
            color = _COLORS[ci % len(_COLORS)]
            ci += 1
            ax.plot(cols["t"], cols["linearized_formula"], color=color, label=f"sigma^2 = {s2:g}")
            ax.plot(cols["t"], cols["mean_k2"], color=color, linestyle="none", marker="o", markersize=2.5)
    ax.set_xlabel(spec.xlabel or "t")
    ax.set_ylabel(spec.ylabel or "second moment of k")
    ax.set_title(spec.title or "linearized growth (lines) vs ensemble (dots)")
    ax.legend()
    _save(fig, spec)
    plt.close(fig)


_RENDERERS = {
    "surface": _render_surface,
    "slice": _render_slice,
    "contour": _render_contour,
    "moments": _render_moments,
    "lines": _render_lines,
}

FIGURE_KINDS = tuple(sorted(_RENDERERS))


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the output path."""
    if spec.kind not in _RENDERERS:
        raise SchemaError(f"unknown figure kind '{spec.kind}' (choose from {', '.join(FIGURE_KINDS)})")
    if not spec.inputs:
        raise SchemaError("at least one input file is required")
    with plt.rc_context(_RC):
        _RENDERERS[spec.kind](spec)
    return Path(spec.out)
