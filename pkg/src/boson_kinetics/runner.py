"""Run orchestration: single runs, snapshot runs, parameter sweeps, and the
CSV/JSON serialization consumed by the figure scripts.

All tabular output is RFC-4180 CSV with '.' decimals and round-trippable
doubles (shortest repr); identical configs produce byte-identical files.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .analysis import compare_distributions
from .config import (
    RunConfig,
    SweepSpec,
    config_to_dict,
    with_parameter,
)
from .errors import BosonKineticsError, ConfigError, ConvergenceError
from .kinetics import (
    build_rate_context,
    evolve,
    find_steady_state,
    steady_state_residual,
    uniform_occupations,
)
from .lattice import Boundary, LatticeParams, ModeSpectrum, build_modes
from .perturbation import (
    PerturbativeSolution,
    bose_einstein,
    deformed_distribution,
    energy_dependent_beta,
    uniform_limit,
)
from .reservoir import (
    ReservoirParams,
    base_inverse_temperature,
    effective_beta_exact,
    noise_spectrum,
)

STEADY_HEADER = ["mode_index", "k", "omega_over_J", "n"]
PERTURBATIVE_HEADER = ["mode_index", "omega_over_J", "n_be", "n_deformed",
                       "beta_of_omega"]
SNAPSHOT_HEADER = ["tau", "mode_index", "omega_over_J", "n"]
SPECTRUM_HEADER = ["omega_over_J", "S_times_J", "beta_eff_times_J"]


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_csv(path: Path, header: list[str], rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    return path


def lattice_params(cfg: RunConfig) -> LatticeParams:
    return LatticeParams(L=cfg.lattice.L, J=1.0, omega0=0.0,
                         boundary=Boundary(cfg.lattice.boundary))


def reservoir_params(cfg: RunConfig) -> ReservoirParams:
    r = cfg.reservoir
    return ReservoirParams(chi=r.chi_over_J, Omega0=r.omega0_drive_over_J,
                           Delta=r.delta_over_J, kappa=r.kappa_over_J)


def _perturbative(spectrum: ModeSpectrum, cfg: RunConfig):
    """Deformed solution, falling back to the uniform infinite-temperature
    branch at Delta = 0."""
    res = reservoir_params(cfg)
    if res.Delta == 0.0:
        n = uniform_limit(spectrum, cfg.particles)
        return PerturbativeSolution(beta0=0.0, mu=math.nan, c=0.0, n=n,
                                    order_flags=("n0",)), n, np.zeros(spectrum.L)
    solution = deformed_distribution(spectrum, cfg.particles, res)
    n_be = bose_einstein(spectrum.omega, solution.beta0, solution.mu)
    beta_w = energy_dependent_beta(spectrum.omega, res, spectrum.hopping)
    return solution, n_be, beta_w


def compute_steady_state(cfg: RunConfig):
    """Spectrum, rate context, and the converged steady state for cfg."""
    if cfg.reservoir.chi_over_J == 0.0:
        raise ConvergenceError(
            "no dynamics: chi = 0 gives no coupling, a steady state is undefined"
        )
    spectrum = build_modes(lattice_params(cfg))
    ctx = build_rate_context(spectrum, reservoir_params(cfg), cfg.gamma_mode)
    n0 = uniform_occupations(cfg.lattice.L, cfg.particles)
    steady = find_steady_state(
        n0, ctx,
        residual_tol=cfg.evolution.residual_tol,
        tau_max=cfg.evolution.tau_max,
        rel_tol=cfg.evolution.rel_tol,
        abs_tol=cfg.evolution.abs_tol,
    )
    return spectrum, ctx, steady


def run_single(cfg: RunConfig, out_dir: Path) -> dict:
    """Steady state + perturbative comparison; writes steady_state.csv,
    perturbative.csv and report.json."""
    out_dir = Path(out_dir)
    spectrum, ctx, steady = compute_steady_state(cfg)
    solution, n_be, beta_w = _perturbative(spectrum, cfg)
    report_cmp = compare_distributions(steady, spectrum, solution)

    write_csv(
        out_dir / "steady_state.csv", STEADY_HEADER,
        ((i, spectrum.k[i], spectrum.omega[i], steady.n[i])
         for i in range(spectrum.L)),
    )
    write_csv(
        out_dir / "perturbative.csv", PERTURBATIVE_HEADER,
        ((i, spectrum.omega[i], n_be[i], solution.n[i], beta_w[i])
         for i in range(spectrum.L)),
    )
    report = {
        "config": config_to_dict(cfg),
        "N": cfg.particles,
        "N_drift": float(steady.n.sum() - cfg.particles),
        "tau_final": steady.tau,
        "residual": steady_state_residual(steady.n, ctx, cfg.particles),
        "beta0_J": base_inverse_temperature(reservoir_params(cfg)),
        "mu_over_J": solution.mu,
        "deformation_constant": solution.c,
        "outside_perturbative_regime": solution.outside_perturbative_regime,
        "excluded_modes": list(report_cmp.excluded_modes),
        "metrics": {
            "kl": report_cmp.kl_vs_perturbative,
            "kl_be": report_cmp.kl_vs_be,
            "R": report_cmp.ratio_R,
            "delta_n": report_cmp.delta_n,
            "delta_n_convention": "n_GS - n_high",
            "fitted_beta_J": report_cmp.fitted_beta,
            "fitted_mu_over_J": report_cmp.fitted_mu,
        },
    }
    if cfg.outputs.report:
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "report.json", "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return report


def run_snapshots(cfg: RunConfig, out_dir: Path) -> list[Path]:
    """Distribution snapshots at the configured tau values: one CSV per
    snapshot plus a combined long-format snapshots.csv."""
    out_dir = Path(out_dir)
    taus = cfg.evolution.snapshot_taus
    if not taus:
        raise ConfigError("evolution.snapshot_taus must be non-empty for snapshots")
    spectrum = build_modes(lattice_params(cfg))
    ctx = build_rate_context(spectrum, reservoir_params(cfg), cfg.gamma_mode)
    n0 = uniform_occupations(cfg.lattice.L, cfg.particles)
    tau_end = taus[-1] if taus[-1] > 0 else 1.0
    output_taus = taus if taus[-1] > 0 else (0.0, 1.0)
    traj = evolve(n0, ctx, tau_end, output_taus=output_taus,
                  rel_tol=cfg.evolution.rel_tol, abs_tol=cfg.evolution.abs_tol)
    snapshots = [s for s in traj.snapshots if s.tau in taus]

    paths = []
    combined = []
    for snap in snapshots:
        rows = [(snap.tau, i, spectrum.omega[i], snap.n[i])
                for i in range(spectrum.L)]
        combined.extend(rows)
        paths.append(
            write_csv(out_dir / f"snapshot_tau{snap.tau:g}.csv", SNAPSHOT_HEADER, rows)
        )
    paths.append(write_csv(out_dir / "snapshots.csv", SNAPSHOT_HEADER, combined))
    return paths


def _cell_metrics(cfg: RunConfig, metrics: tuple[str, ...]) -> dict:
    spectrum, _ctx, steady = compute_steady_state(cfg)
    solution, _n_be, _beta = _perturbative(spectrum, cfg)
    cmp_report = compare_distributions(steady, spectrum, solution)
    values = {
        "kl": cmp_report.kl_vs_perturbative,
        "kl_be": cmp_report.kl_vs_be,
        "R": cmp_report.ratio_R,
        "delta_n": cmp_report.delta_n,
        "fitted_beta": cmp_report.fitted_beta,
    }
    return {m: values[m] for m in metrics}


def _sweep_cell(args):
    index, cfg, metrics = args
    try:
        return index, _cell_metrics(cfg, metrics), ""
    except BosonKineticsError as exc:
        return index, {}, f"{type(exc).__name__}: {exc}"


def sweep_cells(cfg: RunConfig, spec: SweepSpec):
    """Cell configurations in deterministic row order."""
    axis2 = spec.axis2_values if spec.axis2_name else (None,)
    cells = []
    for v1, v2 in itertools.product(spec.axis1_values, axis2):
        cell_cfg = with_parameter(cfg, spec.axis1_name, v1)
        if spec.axis2_name:
            cell_cfg = with_parameter(cell_cfg, spec.axis2_name, v2)
        cells.append(cell_cfg)
    return cells


def run_sweep(cfg: RunConfig, spec: SweepSpec, out_dir: Path,
              workers: int = 1) -> Path:
    """Evaluate every grid cell (optionally in parallel processes) and
    write sweep.csv; per-cell failures land in the error column."""
    out_dir = Path(out_dir)
    cells = sweep_cells(cfg, spec)
    jobs = [(i, cell, spec.metrics) for i, cell in enumerate(cells)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, jobs, chunksize=1))
    else:
        results = [_sweep_cell(job) for job in jobs]
    results.sort(key=lambda r: r[0])

    axis_extra = [name for name in (spec.axis1_name, spec.axis2_name)
                  if name and name not in ("delta_over_J", "kappa_over_J")]
    header = ["delta_over_J", "kappa_over_J", *axis_extra, *spec.metrics, "error"]
    rows = []
    for (index, values, error), cell in zip(results, cells):
        row = [cell.reservoir.delta_over_J, cell.reservoir.kappa_over_J]
        for name in axis_extra:
            row.append(cell.lattice.L if name == "L" else getattr(
                cell.reservoir, name, getattr(cell, name, None)))
        for m in spec.metrics:
            row.append("" if error else values[m])
        row.append(error)
        rows.append(row)
    return write_csv(out_dir / "sweep.csv", header, rows)


def run_spectrum(cfg: RunConfig, out_dir: Path, omega_max: float = 4.0,
                 n_points: int = 801) -> Path:
    """Dump S(w) and the exact Stokes beta_eff(w) on a uniform grid."""
    res = reservoir_params(cfg)
    w = np.linspace(-omega_max, omega_max, n_points)
    s = noise_spectrum(w, res)
    beta = effective_beta_exact(w, res, J=1.0)
    return write_csv(Path(out_dir) / "spectrum.csv", SPECTRUM_HEADER,
                     zip(w, s, beta))
