"""Command-line runner: reproducible CSV/JSON artifacts from every module.

Grammar:

    kklab <soliton|audit|ode|ensemble|pde|pii>
          [--config FILE] [--seed N] [--out DIR] [--format csv|json]

Config files are JSON; flags override file values; every unknown key is a
usage error naming the key.  Each run writes a manifest.json echoing the
fully resolved config plus the artifact version, and running again from
that manifest reproduces the data files byte for byte.

Exit codes: 0 success, 2 usage error, 3 numerical divergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .io import format_float, write_json, write_snapshot, write_table
from .painleve import solve_pii
from .riccati import (
    BlowupError,
    FiniteTimeSingularityError,
    RiccatiModel,
    riccati_closed_form,
    riccati_perturbative,
    solve_riccati_numeric,
)
from .soliton import SolitonParams, audit_momentum_derivation, sech_moment, soliton_profile
from .spectral import (
    DivergedStateError,
    Grid,
    PdeConfig,
    PdeState,
    run_pde,
    traveling_wave_residual,
)
from .stochastic import (
    DegenerateEnsembleError,
    NoiseModel,
    ensemble_moments,
    second_moment_closed_form,
    second_moment_linearized,
)

_DIVERGENCE_ERRORS = (DivergedStateError, BlowupError, DegenerateEnsembleError, FiniteTimeSingularityError)


class UsageError(Exception):
    pass


_DEFAULTS: dict[str, dict] = {
    "soliton": {
        "k": 1.0,
        "x_min": -10.0,
        "x_max": 10.0,
        "nx": 201,
        "t_min": 0.0,
        "t_max": 5.0,
        "nt": 51,
        "slice_t": 0.0,
    },
    "audit": {"k": 1.0, "alpha": 1.0, "beta": 0.1},
    "ode": {"alpha": 1.0, "beta": 0.1, "k0": 1.0, "t_max": 1.8, "n_samples": 51, "rk4_steps": 10000},
    "ensemble": {
        "sigma2": [0.05, 0.15, 0.25],
        "beta": 0.1,
        "k0": 1.0,
        "alpha0": 0.0,
        "convention": "ito",
        "n_paths": 2000,
        "dt": 1e-3,
        "t_max": 2.0,
        "sample_every": 10,
        "n_jobs": 1,
    },
    "pde": {
        "k": 1.0,
        "length": 80.0,
        "n": 512,
        "dt": 1e-5,
        "t_final": 0.1,
        "scheme": "etdrk4",
        "alpha": 0.0,
        "alpha_sigma2": 0.0,
        "beta": 0.01,
        "dealias": True,
        "include_nonlinear": True,
        "sample_every": 500,
        "store_snapshots": False,
        "binary_snapshots": False,
    },
    "pii": {"delta": 1.0, "q0": -1.0, "q0_prime": 1.0, "z_min": 1.0, "z_max": 5.0, "n_steps": 10000},
}

_COMMON_KEYS = ("seed", "out", "format")


def _resolve_config(command: str, args: argparse.Namespace) -> dict:
    cfg = dict(_DEFAULTS[command])
    cfg["seed"] = 12345
    cfg["format"] = "csv"
    cfg["out"] = f"runs/{command}"
    if args.config is not None:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError(f"config {args.config} must be a JSON object")
        if "config" in loaded and "command" in loaded:  # a manifest from a previous run
            if loaded["command"] != command:
                raise UsageError(f"manifest is for '{loaded['command']}', not '{command}'")
            loaded = loaded["config"]
        for key, value in loaded.items():
            if key not in cfg:
                raise UsageError(f"unknown config key '{key}' for subcommand '{command}'")
            cfg[key] = value
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out is not None:
        cfg["out"] = args.out
    if args.format is not None:
        cfg["format"] = args.format
    if cfg["format"] not in ("csv", "json"):
        raise UsageError(f"format must be 'csv' or 'json', got {cfg['format']!r}")
    if not isinstance(cfg["seed"], int):
        raise UsageError(f"seed must be an integer, got {cfg['seed']!r}")
    return cfg


def _outdir(cfg: dict) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _table_name(base: str, fmt: str) -> str:
    return f"{base}.{ 'csv' if fmt == 'csv' else 'json' }"


def _write_manifest(out: Path, command: str, cfg: dict) -> None:
    write_json(out / "manifest.json", {"artifact_version": __version__, "command": command, "config": cfg})


def cmd_soliton(cfg: dict) -> None:
    out = _outdir(cfg)
    params = SolitonParams(k=float(cfg["k"]))
    x = np.linspace(float(cfg["x_min"]), float(cfg["x_max"]), int(cfg["nx"]))
    ts = np.linspace(float(cfg["t_min"]), float(cfg["t_max"]), int(cfg["nt"]))
    rows = []
    for t in ts:
        u = soliton_profile(params, x, float(t))
        rows.extend((t, xi, ui) for xi, ui in zip(x, u))
    write_table(out / _table_name("soliton_surface", cfg["format"]), ("t", "x", "u"), rows, cfg["format"])
    u0 = soliton_profile(params, x, float(cfg["slice_t"]))
    write_table(
        out / _table_name("soliton_slice", cfg["format"]), ("x", "u"), list(zip(x, u0)), cfg["format"]
    )
    _write_manifest(out, "soliton", cfg)


def cmd_audit(cfg: dict) -> None:
    out = _outdir(cfg)
    audit = audit_momentum_derivation(SolitonParams(k=float(cfg["k"])), float(cfg["alpha"]), float(cfg["beta"]))
    doc = {
        "closed_form_P": audit.closed_form_P,
        "quadrature_P": audit.quadrature_P,
        "alpha_term_closed": audit.alpha_term_closed,
        "alpha_term_quadrature": audit.alpha_term_quadrature,
        "beta_term_closed": audit.beta_term_closed,
        "beta_term_quadrature": audit.beta_term_quadrature,
        "entries": [
            {"name": e.name, "closed": e.closed, "quadrature": e.quadrature, "rel_error": e.rel_error}
            for e in audit.entries
        ],
        "discrepancy_flags": [e.name for e in audit.discrepancy_flags],
        "sech_moments": {str(n): sech_moment(n) for n in (2, 4, 6, 8)},
    }
    write_json(out / "momentum_audit.json", doc)
    _write_manifest(out, "audit", cfg)


def cmd_ode(cfg: dict) -> None:
    out = _outdir(cfg)
    model = RiccatiModel(alpha=float(cfg["alpha"]), beta=float(cfg["beta"]), k0=float(cfg["k0"]))
    t_grid = np.linspace(0.0, float(cfg["t_max"]), int(cfg["n_samples"]))
    k_num = solve_riccati_numeric(model, t_grid, n_steps=int(cfg["rk4_steps"]))
    k_closed = riccati_closed_form(model, t_grid)
    k_pert = riccati_perturbative(model, t_grid)
    rows = list(zip(t_grid, k_num, k_closed, k_pert))
    write_table(
        out / _table_name("ode_trajectory", cfg["format"]),
        ("t", "k_numeric", "k_closed", "k_perturbative"),
        rows,
        cfg["format"],
    )
    _write_manifest(out, "ode", cfg)


_ENSEMBLE_HEADER = ("t", "mean_k", "mean_k2", "se_k", "se_k2", "paper_formula", "linearized_formula", "survived")
_FIGURE_HEADER = ("t", "sigma2", "mean_k2", "se_k2", "paper_formula", "linearized_formula")


def _sigma_tag(s2: float) -> str:
    return format(s2, "g").replace(".", "p").replace("-", "m")


def cmd_ensemble(cfg: dict) -> None:
    import warnings as _warnings

    out = _outdir(cfg)
    sigma_list = cfg["sigma2"] if isinstance(cfg["sigma2"], (list, tuple)) else [cfg["sigma2"]]
    beta, k0 = float(cfg["beta"]), float(cfg["k0"])
    dt, t_max = float(cfg["dt"]), float(cfg["t_max"])
    n_steps = int(round(t_max / dt))
    t_grid = dt * np.arange(n_steps + 1)
    every = int(cfg["sample_every"])
    fig3_rows, fig4_rows, fig5_rows = [], [], []
    sigma_max = max(float(s) for s in sigma_list)
    t_lin = 0.1 / sigma_max  # joint window where every sigma2 satisfies sigma2*t <= 0.1
    for s2 in sigma_list:
        s2 = float(s2)
        noise = NoiseModel(
            sigma2=s2,
            alpha0=float(cfg["alpha0"]),
            convention=str(cfg["convention"]),
            seed=int(cfg["seed"]),
            dt=dt,
        )
        stats = ensemble_moments(noise, beta, k0, t_grid, int(cfg["n_paths"]), n_jobs=int(cfg["n_jobs"]))
        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore")
            closed = second_moment_closed_form(s2, beta, k0, t_grid)
            lin = second_moment_linearized(s2, beta, k0, t_grid)
        idx = list(range(0, t_grid.size, every))
        if idx[-1] != t_grid.size - 1:
            idx.append(t_grid.size - 1)
        rows = [
            (
                t_grid[i],
                stats.mean_k[i],
                stats.mean_k2[i],
                stats.se_k[i],
                stats.se_k2[i],
                closed[i],
                lin[i],
                stats.survived_paths,
            )
            for i in idx
        ]
        write_table(
            out / _table_name(f"ensemble_sigma2_{_sigma_tag(s2)}", cfg["format"]),
            _ENSEMBLE_HEADER,
            rows,
            cfg["format"],
        )
        fig3_rows.extend((t_grid[i], s2, stats.mean_k2[i], stats.se_k2[i], closed[i], lin[i]) for i in idx)

        # figure-4 companion: same noise, damping off
        stats0 = ensemble_moments(noise, 0.0, k0, t_grid, int(cfg["n_paths"]), n_jobs=int(cfg["n_jobs"]))
        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore")
            closed0 = second_moment_closed_form(s2, 0.0, k0, t_grid)
            lin0 = second_moment_linearized(s2, 0.0, k0, t_grid)
        fig4_rows.extend((t_grid[i], s2, stats0.mean_k2[i], stats0.se_k2[i], closed0[i], lin0[i]) for i in idx)
        fig5_rows.extend(
            (t_grid[i], s2, stats.mean_k2[i], stats.se_k2[i], closed[i], lin[i])
            for i in idx
            if t_grid[i] <= t_lin + 1e-12
        )
    write_table(out / _table_name("figure3", cfg["format"]), _FIGURE_HEADER, fig3_rows, cfg["format"])
    write_table(out / _table_name("figure4", cfg["format"]), _FIGURE_HEADER, fig4_rows, cfg["format"])
    write_table(out / _table_name("figure5", cfg["format"]), _FIGURE_HEADER, fig5_rows, cfg["format"])
    _write_manifest(out, "ensemble", cfg)


def cmd_pde(cfg: dict) -> None:
    out = _outdir(cfg)
    grid = Grid(length=float(cfg["length"]), n=int(cfg["n"]))
    params = SolitonParams(k=float(cfg["k"]))
    dt = float(cfg["dt"])
    n_steps = int(round(float(cfg["t_final"]) / dt))
    if float(cfg["alpha_sigma2"]) > 0.0:
        from .stochastic import NoiseModel as _NM, sample_path as _sp

        noise = _NM(sigma2=float(cfg["alpha_sigma2"]), alpha0=float(cfg["alpha"]), seed=int(cfg["seed"]), dt=dt)
        increments = _sp(noise, 0, dt * np.arange(n_steps + 1))
        alpha = increments / dt  # piecewise-constant gain per step
    else:
        alpha = float(cfg["alpha"])
    config = PdeConfig(
        alpha=alpha,
        beta=float(cfg["beta"]),
        dt=dt,
        scheme=str(cfg["scheme"]),
        dealias=bool(cfg["dealias"]),
        include_nonlinear=bool(cfg["include_nonlinear"]),
    )
    initial = PdeState(t=0.0, u=soliton_profile(params, grid.x, 0.0))
    traj = run_pde(
        initial,
        config,
        grid,
        float(cfg["t_final"]),
        sample_every=int(cfg["sample_every"]),
        store_snapshots=bool(cfg["store_snapshots"]),
    )
    rows = list(zip(traj.times, traj.momentum, traj.grad2, traj.cubic_flux, traj.mass, traj.balance_residual))
    write_table(
        out / _table_name("diagnostics", cfg["format"]),
        ("t", "P", "grad2", "cubic_flux", "mass", "balance_residual"),
        rows,
        cfg["format"],
    )
    final = traj.final_state
    write_table(
        out / _table_name("final_snapshot", cfg["format"]),
        ("t", "x", "u"),
        [(final.t, xi, ui) for xi, ui in zip(grid.x, final.u)],
        cfg["format"],
    )
    if bool(cfg["store_snapshots"]):
        for i, snap in enumerate(traj.snapshots):
            write_table(
                out / _table_name(f"snapshot_{i:04d}", cfg["format"]),
                ("t", "x", "u"),
                [(snap.t, xi, ui) for xi, ui in zip(grid.x, snap.u)],
                cfg["format"],
            )
    if bool(cfg["binary_snapshots"]):
        write_snapshot(out / "final_snapshot.bin", final.t, grid.length, final.u)
    write_json(out / "ansatz_residual.json", traveling_wave_residual(params, grid))
    _write_manifest(out, "pde", cfg)


def cmd_pii(cfg: dict) -> None:
    out = _outdir(cfg)
    sol = solve_pii(
        float(cfg["delta"]),
        float(cfg["q0"]),
        float(cfg["q0_prime"]),
        (float(cfg["z_min"]), float(cfg["z_max"])),
        n_steps=int(cfg["n_steps"]),
    )
    rows = list(zip(sol.z_grid, sol.q, sol.q_prime, sol.residual))
    write_table(
        out / _table_name("pii_solution", cfg["format"]), ("z", "q", "q_prime", "residual"), rows, cfg["format"]
    )
    write_json(
        out / "pii_report.json",
        {
            "delta": sol.delta,
            "pole_found": sol.pole_found,
            "pole_estimate": sol.pole_estimate,
            "max_residual": sol.max_residual,
            "n_points": int(sol.z_grid.size),
        },
    )
    _write_manifest(out, "pii", cfg)


_COMMANDS = {
    "soliton": cmd_soliton,
    "audit": cmd_audit,
    "ode": cmd_ode,
    "ensemble": cmd_ensemble,
    "pde": cmd_pde,
    "pii": cmd_pii,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kklab", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config (or a previous manifest.json)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args.command, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        _COMMANDS[args.command](cfg)
    except _DIVERGENCE_ERRORS as exc:
        print(f"numerical divergence: {exc}", file=sys.stderr)
        return 3
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
