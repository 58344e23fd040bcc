import csv
import json
from pathlib import Path

import pytest


def write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    return path


@pytest.fixture
def synthetic_tables(tmp_path):
    """Miniature tables carrying the exact producer schemas."""
    omega = [-1.5, -0.5, 0.5, 1.5]
    steady = write_csv(
        tmp_path / "steady_state.csv",
        ["mode_index", "k", "omega_over_J", "n"],
        [[i, 0.5 + i, w, 2.0 - 0.5 * i] for i, w in enumerate(omega)],
    )
    perturbative = write_csv(
        tmp_path / "perturbative.csv",
        ["mode_index", "omega_over_J", "n_be", "n_deformed", "beta_of_omega"],
        [[i, w, 1.9 - 0.5 * i, 2.0 - 0.5 * i, 1.1] for i, w in enumerate(omega)],
    )
    snapshots = write_csv(
        tmp_path / "snapshots.csv",
        ["tau", "mode_index", "omega_over_J", "n"],
        [[t, i, w, 0.5 + 0.1 * t] for t in (0.0, 1.0) for i, w in enumerate(omega)],
    )
    sweep = write_csv(
        tmp_path / "sweep.csv",
        ["delta_over_J", "kappa_over_J", "kl", "kl_be", "R", "delta_n",
         "fitted_beta", "error"],
        [[d, k, 1e-3, 1e-2, 10.0, 0.5, 1.2, ""]
         for d in (-3.0, -2.0) for k in (1.0, 2.0)]
        + [[-1.0, 1.0, "", "", "", "", "", "ConvergenceError: no dynamics"]],
    )
    return {"steady": steady, "perturbative": perturbative,
            "snapshots": snapshots, "sweep": sweep, "dir": tmp_path}


def make_spec(tmp_path, kind, inputs, **extra):
    doc = {
        "kind": kind,
        "inputs": {k: str(v) for k, v in inputs.items()},
        "output": str(tmp_path / f"{kind}.png"),
        **extra,
    }
    path = tmp_path / f"{kind}_spec.json"
    path.write_text(json.dumps(doc))
    return path, Path(doc["output"])
