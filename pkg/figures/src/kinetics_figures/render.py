"""Renderers: one function per figure kind, plotting only (no computation
beyond reading the tables)."""

from __future__ import annotations

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .figspec import (
    PERTURBATIVE_HEADER,
    SNAPSHOT_HEADER,
    STEADY_HEADER,
    SWEEP_PREFIX,
    FigureSpec,
    FigureSpecError,
    load_spec,
    read_table,
)


def _columns(header, data, names):
    idx = [header.index(n) for n in names]
    return [np.array([float(row[i]) for row in data]) for i in idx]


def _finish(fig, ax, spec: FigureSpec):
    ax.set_xlabel(spec.labels.get("x", "omega / J"))
    ax.set_ylabel(spec.labels.get("y", "occupation"))
    if "title" in spec.labels:
        ax.set_title(spec.labels["title"])
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output)
    plt.close(fig)
    return spec.output


def render_lines(spec: FigureSpec) -> Path:
    """Steady-state occupations overlaid with the deformed and
    Bose-Einstein curves."""
    header_s, data_s = read_table(spec.inputs["steady"], STEADY_HEADER)
    header_p, data_p = read_table(spec.inputs["perturbative"], PERTURBATIVE_HEADER)
    omega, n = _columns(header_s, data_s, ["omega_over_J", "n"])
    omega_p, n_be, n_def = _columns(header_p, data_p,
                                    ["omega_over_J", "n_be", "n_deformed"])
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(omega, n, lw=1.0, color="C0", label="steady state")
    ax.plot(omega_p, n_def, lw=2.2, alpha=0.65, color="C1", label="deformed")
    ax.plot(omega_p, n_be, ls="--", color="C2", label="Bose-Einstein")
    ax.legend(frameon=False)
    return _finish(fig, ax, spec)


def render_heatmap(spec: FigureSpec) -> Path:
    """One sweep metric over the detuning/decay grid."""
    header, data = read_table(spec.inputs["sweep"], header_prefix=SWEEP_PREFIX)
    metric = spec.metric or "kl"
    if metric not in header:
        raise FigureSpecError(
            f"{spec.inputs['sweep']}: metric column {metric!r} not found in {header}"
        )
    col = header.index(metric)
    delta = np.array([float(r[0]) for r in data])
    kappa = np.array([float(r[1]) for r in data])
    values = np.array([float(r[col]) if r[col] else np.nan for r in data])
    d_ax = np.unique(delta)
    k_ax = np.unique(kappa)
    grid = np.full((d_ax.size, k_ax.size), np.nan)
    for d, k, v in zip(delta, kappa, values):
        grid[np.searchsorted(d_ax, d), np.searchsorted(k_ax, k)] = v
    fig, ax = plt.subplots(figsize=(4.6, 3.6))
    with np.errstate(invalid="ignore"):
        mesh = ax.pcolormesh(k_ax, d_ax, np.log10(np.abs(grid)), shading="nearest")
    fig.colorbar(mesh, ax=ax, label=f"log10 {metric}")
    spec.labels.setdefault("x", "kappa / J")
    spec.labels.setdefault("y", "Delta / J")
    return _finish(fig, ax, spec)


def render_snapshots(spec: FigureSpec) -> Path:
    """Distribution snapshots, one curve per recorded time."""
    header, data = read_table(spec.inputs["snapshots"], SNAPSHOT_HEADER)
    tau, omega, n = _columns(header, data, ["tau", "omega_over_J", "n"])
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    for value in np.unique(tau):
        sel = tau == value
        ax.plot(omega[sel], n[sel], label=f"tau = {value:g}")
    ax.legend(frameon=False, fontsize=8)
    return _finish(fig, ax, spec)


RENDERERS = {
    "lines": render_lines,
    "heatmap": render_heatmap,
    "snapshots": render_snapshots,
}


def render(spec: FigureSpec) -> Path:
    return RENDERERS[spec.kind](spec)


def main_for_kind(kind: str, argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if len(argv) != 1:
        print(f"usage: render_{kind}.py <spec.json>", file=sys.stderr)
        return 2
    try:
        spec = load_spec(argv[0])
        if spec.kind != kind:
            raise FigureSpecError(f"spec kind {spec.kind!r} does not match {kind!r}")
        path = render(spec)
    except FigureSpecError as exc:
        print(f"figure error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {path}")
    return 0
