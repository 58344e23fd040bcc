import csv
import json
from pathlib import Path

import numpy as np
import pytest

from boson_kinetics import ConfigError, parse_config, parse_sweep_spec, serialize_config
from boson_kinetics.cli import main
from boson_kinetics.config import (
    RunConfig,
    default_sweep_spec,
    with_parameter,
)
from boson_kinetics.runner import (
    PERTURBATIVE_HEADER,
    SNAPSHOT_HEADER,
    SPECTRUM_HEADER,
    STEADY_HEADER,
    run_single,
    run_sweep,
)

SMALL = {
    "lattice": {"L": 12},
    "particles": 6,
    "reservoir": {"delta_over_J": -3.0, "kappa_over_J": 1.0},
}


def write_config(tmp_path, doc, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def test_empty_config_gives_reference_defaults():
    cfg = parse_config("{}")
    assert cfg.lattice.L == 100
    assert cfg.lattice.boundary == "open"
    assert cfg.particles == 50.0
    assert cfg.reservoir.chi_over_J == 0.001
    assert cfg.reservoir.omega0_drive_over_J == 0.1
    assert cfg.reservoir.delta_over_J == -3.0
    assert cfg.reservoir.kappa_over_J == 1.0
    assert cfg.gamma_mode == "site_resolved"
    assert cfg.evolution.rel_tol == 1e-8
    assert cfg.evolution.residual_tol == 1e-10


@pytest.mark.parametrize("doc,needle", [
    ({"latice": {}}, "latice"),
    ({"lattice": {"M": 3}}, "lattice.M"),
    ({"reservoir": {"Delta": -3}}, "reservoir.Delta"),
    ({"evolution": {"snapshots": []}}, "evolution.snapshots"),
])
def test_unknown_fields_are_named(doc, needle):
    with pytest.raises(ConfigError, match=needle.replace(".", r"\.")):
        parse_config(json.dumps(doc))


@pytest.mark.parametrize("doc,path_part", [
    ({"lattice": {"L": "ten"}}, "lattice.L"),
    ({"particles": True}, "particles"),
    ({"lattice": {"L": 2.5}}, "lattice.L"),
    ({"evolution": {"snapshot_taus": 3}}, "evolution.snapshot_taus"),
    ({"gamma_mode": 7}, "gamma_mode"),
])
def test_type_mismatches_carry_paths(doc, path_part):
    with pytest.raises(ConfigError, match=path_part.replace(".", r"\.")):
        parse_config(json.dumps(doc))


@pytest.mark.parametrize("doc", [
    {"lattice": {"L": 0}},
    {"particles": 0},
    {"particles": -5},
    {"reservoir": {"kappa_over_J": 0.0}},
    {"reservoir": {"chi_over_J": -1.0}},
    {"evolution": {"snapshot_taus": [3.0, 1.0]}},
    {"evolution": {"snapshot_taus": [-1.0]}},
    {"evolution": {"rel_tol": 0.0}},
    {"gamma_mode": "diagonal"},
    {"lattice": {"boundary": "closed"}},
])
def test_invariant_violations_rejected(doc):
    with pytest.raises(ConfigError):
        parse_config(json.dumps(doc))


def test_config_round_trip():
    cfg = parse_config(json.dumps({
        "lattice": {"L": 7, "boundary": "periodic"},
        "particles": 3.5,
        "reservoir": {"delta_over_J": 2.0, "kappa_over_J": 0.25},
        "gamma_mode": "uniform",
        "evolution": {"snapshot_taus": [0.0, 2.0], "abs_tol": 1e-13},
        "outputs": {"directory": "elsewhere", "report": False},
    }))
    assert parse_config(serialize_config(cfg)) == cfg
    assert parse_config(serialize_config(RunConfig())) == RunConfig()


def test_with_parameter():
    cfg = RunConfig()
    assert with_parameter(cfg, "delta_over_J", 2.0).reservoir.delta_over_J == 2.0
    assert with_parameter(cfg, "particles", 5).particles == 5.0
    assert with_parameter(cfg, "L", 8).lattice.L == 8
    with pytest.raises(ConfigError):
        with_parameter(cfg, "boundary", 1.0)


def test_sweep_spec_parsing():
    spec = parse_sweep_spec(json.dumps({
        "axis1": {"name": "delta_over_J", "values": [-3.0, -2.0]},
        "axis2": {"name": "particles", "values": [5, 50]},
        "metrics": ["kl", "R"],
    }))
    assert spec.axis1_values == (-3.0, -2.0)
    assert spec.axis2_name == "particles"
    assert spec.metrics == ("kl", "R")
    with pytest.raises(ConfigError):
        parse_sweep_spec(json.dumps({"axis1": {"name": "nope", "values": [1]}}))
    with pytest.raises(ConfigError):
        parse_sweep_spec(json.dumps({"axis1": {"name": "L", "values": []}}))
    with pytest.raises(ConfigError):
        parse_sweep_spec(json.dumps({"axis1": {"name": "L", "values": [4]},
                                     "metrics": ["entropy"]}))
    default = default_sweep_spec()
    assert len(default.axis1_values) == 12 and len(default.axis2_values) == 12


def test_steady_command_outputs(tmp_path):
    cfg_path = write_config(tmp_path, SMALL)
    out = tmp_path / "run"
    assert main(["steady", "--config", cfg_path, "--out", str(out)]) == 0

    header, rows = read_csv(out / "steady_state.csv")
    assert header == STEADY_HEADER
    assert len(rows) == 12
    total = sum(float(r[3]) for r in rows)
    assert abs(total - 6.0) < 1e-8

    header, rows = read_csv(out / "perturbative.csv")
    assert header == PERTURBATIVE_HEADER
    assert len(rows) == 12

    report = json.loads((out / "report.json").read_text())
    assert abs(report["N_drift"]) < 1e-9 * 6.0
    assert report["metrics"]["delta_n_convention"] == "n_GS - n_high"
    assert report["config"]["lattice"]["L"] == 12


def test_steady_zero_coupling_is_convergence_error(tmp_path):
    cfg_path = write_config(tmp_path, {**SMALL, "reservoir": {"chi_over_J": 0.0}})
    assert main(["steady", "--config", cfg_path, "--out", str(tmp_path / "o")]) == 3


def test_config_errors_exit_code(tmp_path):
    cfg_path = write_config(tmp_path, {"lattice": {"L": 0}})
    assert main(["steady", "--config", cfg_path, "--out", str(tmp_path / "o")]) == 2
    assert main(["steady", "--config", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["steady", "--config", str(bad)]) == 2


def test_io_error_exit_code(tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("a file, not a directory")
    cfg_path = write_config(tmp_path, SMALL)
    assert main(["steady", "--config", cfg_path, "--out", str(blocker)]) == 4


def test_snapshots_command(tmp_path):
    doc = {**SMALL, "evolution": {"snapshot_taus": [0.0, 1.0, 10.0]}}
    cfg_path = write_config(tmp_path, doc)
    out = tmp_path / "snaps"
    assert main(["snapshots", "--config", cfg_path, "--out", str(out)]) == 0
    for name in ("snapshot_tau0.csv", "snapshot_tau1.csv", "snapshot_tau10.csv",
                 "snapshots.csv"):
        assert (out / name).exists()
    header, rows = read_csv(out / "snapshot_tau0.csv")
    assert header == SNAPSHOT_HEADER
    assert len(rows) == 12
    assert all(float(r[3]) == 0.5 for r in rows)
    header, rows = read_csv(out / "snapshots.csv")
    assert len(rows) == 36


def test_snapshots_empty_taus_rejected(tmp_path):
    doc = {**SMALL, "evolution": {"snapshot_taus": []}}
    cfg_path = write_config(tmp_path, doc)
    assert main(["snapshots", "--config", cfg_path, "--out", str(tmp_path / "s")]) == 2


def test_sweep_single_cell_matches_run_single(tmp_path):
    cfg = parse_config(json.dumps(SMALL))
    report = run_single(cfg, tmp_path / "single")
    spec = parse_sweep_spec(json.dumps({
        "axis1": {"name": "delta_over_J", "values": [-3.0]},
        "axis2": {"name": "kappa_over_J", "values": [1.0]},
    }))
    path = run_sweep(cfg, spec, tmp_path / "sweep")
    header, rows = read_csv(path)
    assert header == ["delta_over_J", "kappa_over_J", "kl", "kl_be", "R",
                      "delta_n", "fitted_beta", "error"]
    assert len(rows) == 1
    row = rows[0]
    assert float(row[2]) == pytest.approx(report["metrics"]["kl"], rel=1e-12)
    assert float(row[4]) == pytest.approx(report["metrics"]["R"], rel=1e-12)
    assert row[7] == ""


def test_sweep_records_cell_failures(tmp_path):
    cfg = parse_config(json.dumps(SMALL))
    spec = parse_sweep_spec(json.dumps({
        "axis1": {"name": "chi_over_J", "values": [0.001, 0.0]},
    }))
    header, rows = read_csv(run_sweep(cfg, spec, tmp_path))
    assert header[2] == "chi_over_J"
    assert rows[0][-1] == ""
    assert "ConvergenceError" in rows[1][-1]
    assert rows[1][header.index("kl")] == ""


def test_sweep_determinism_and_worker_independence(tmp_path):
    cfg = parse_config(json.dumps(SMALL))
    spec = parse_sweep_spec(json.dumps({
        "axis1": {"name": "delta_over_J", "values": [-3.0, 2.0]},
        "axis2": {"name": "kappa_over_J", "values": [0.5, 2.0]},
    }))
    p1 = run_sweep(cfg, spec, tmp_path / "a", workers=1)
    p2 = run_sweep(cfg, spec, tmp_path / "b", workers=1)
    p3 = run_sweep(cfg, spec, tmp_path / "c", workers=2)
    assert p1.read_bytes() == p2.read_bytes() == p3.read_bytes()


def test_run_single_deterministic_bytes(tmp_path):
    cfg = parse_config(json.dumps(SMALL))
    run_single(cfg, tmp_path / "x")
    run_single(cfg, tmp_path / "y")
    for name in ("steady_state.csv", "perturbative.csv", "report.json"):
        assert (tmp_path / "x" / name).read_bytes() == (tmp_path / "y" / name).read_bytes()


def test_spectrum_command(tmp_path):
    cfg_path = write_config(tmp_path, SMALL)
    out = tmp_path / "spec"
    assert main(["spectrum", "--config", cfg_path, "--out", str(out)]) == 0
    header, rows = read_csv(out / "spectrum.csv")
    assert header == SPECTRUM_HEADER
    assert len(rows) == 801
    w = np.array([float(r[0]) for r in rows])
    s = np.array([float(r[1]) for r in rows])
    assert w[0] == -4.0 and w[-1] == 4.0
    assert s.argmax() == int(np.argmin(np.abs(w - 3.0)))


def test_out_dir_env_override(tmp_path, monkeypatch):
    cfg_path = write_config(tmp_path, SMALL)
    env_dir = tmp_path / "from_env"
    monkeypatch.setenv("BOSON_KINETICS_OUT", str(env_dir))
    monkeypatch.chdir(tmp_path)
    assert main(["spectrum", "--config", cfg_path]) == 0
    assert (env_dir / "spectrum.csv").exists()
    # --out wins over the environment variable
    out_dir = tmp_path / "explicit"
    assert main(["spectrum", "--config", cfg_path, "--out", str(out_dir)]) == 0
    assert (out_dir / "spectrum.csv").exists()
