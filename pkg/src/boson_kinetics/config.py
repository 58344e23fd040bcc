"""Run configuration: JSON schema, defaults, validation, serialization.

Missing fields take the reference parameter set used throughout
(L=100, N=50, chi/J=1e-3, Omega0/J=0.1, Delta/J=-3, kappa/J=1, open
boundary).  All reservoir energies are dimensionless ratios over the
hopping J.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import ConfigError

GAMMA_MODES = ("site_resolved", "uniform")
BOUNDARIES = ("open", "periodic")

# numeric RunConfig fields a sweep may scan, mapped to their location
SWEEPABLE = {
    "delta_over_J": ("reservoir", "delta_over_J"),
    "kappa_over_J": ("reservoir", "kappa_over_J"),
    "chi_over_J": ("reservoir", "chi_over_J"),
    "omega0_drive_over_J": ("reservoir", "omega0_drive_over_J"),
    "particles": (None, "particles"),
    "L": ("lattice", "L"),
}

METRIC_NAMES = ("kl", "kl_be", "R", "delta_n", "fitted_beta")


@dataclass(frozen=True)
class LatticeConfig:
    L: int = 100
    boundary: str = "open"


@dataclass(frozen=True)
class ReservoirConfig:
    chi_over_J: float = 0.001
    omega0_drive_over_J: float = 0.1
    delta_over_J: float = -3.0
    kappa_over_J: float = 1.0


@dataclass(frozen=True)
class EvolutionConfig:
    tau_max: float = 1e7
    rel_tol: float = 1e-8
    abs_tol: float | None = None
    residual_tol: float = 1e-10
    snapshot_taus: tuple[float, ...] = (0.0, 1.0, 3.0, 10.0)


@dataclass(frozen=True)
class OutputConfig:
    directory: str | None = None
    report: bool = True


@dataclass(frozen=True)
class RunConfig:
    lattice: LatticeConfig = field(default_factory=LatticeConfig)
    particles: float = 50.0
    reservoir: ReservoirConfig = field(default_factory=ReservoirConfig)
    gamma_mode: str = "site_resolved"
    evolution: EvolutionConfig = field(default_factory=EvolutionConfig)
    outputs: OutputConfig = field(default_factory=OutputConfig)


@dataclass(frozen=True)
class SweepSpec:
    """One or two named parameter axes plus the per-cell metric selection."""

    axis1_name: str
    axis1_values: tuple[float, ...]
    axis2_name: str | None = None
    axis2_values: tuple[float, ...] = ()
    metrics: tuple[str, ...] = METRIC_NAMES


def _require_number(value, path, integer=False):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"type mismatch at {path}: expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"type mismatch at {path}: expected an integer, got {value!r}")
    if value != value or value in (float("inf"), float("-inf")):
        raise ConfigError(f"invariant violated at {path}: value must be finite")
    return int(value) if integer else float(value)


def _require_str(value, path, choices=None):
    if not isinstance(value, str):
        raise ConfigError(f"type mismatch at {path}: expected a string, got {value!r}")
    if choices is not None and value not in choices:
        raise ConfigError(
            f"invariant violated at {path}: must be one of {', '.join(choices)}"
        )
    return value


def _check_unknown(doc: dict, known, path: str):
    for key in doc:
        if key not in known:
            where = f"{path}.{key}" if path else key
            raise ConfigError(f"unknown field '{where}'")


def _parse_lattice(doc: dict) -> LatticeConfig:
    _check_unknown(doc, {"L", "boundary"}, "lattice")
    cfg = LatticeConfig()
    if "L" in doc:
        L = _require_number(doc["L"], "lattice.L", integer=True)
        if L < 1:
            raise ConfigError("invariant violated at lattice.L: L >= 1 required")
        cfg = replace(cfg, L=L)
    if "boundary" in doc:
        cfg = replace(cfg, boundary=_require_str(doc["boundary"], "lattice.boundary",
                                                 BOUNDARIES))
    return cfg


def _parse_reservoir(doc: dict) -> ReservoirConfig:
    fields = ("chi_over_J", "omega0_drive_over_J", "delta_over_J", "kappa_over_J")
    _check_unknown(doc, set(fields), "reservoir")
    values = {}
    for name in fields:
        if name in doc:
            values[name] = _require_number(doc[name], f"reservoir.{name}")
    cfg = replace(ReservoirConfig(), **values)
    if not cfg.kappa_over_J > 0:
        raise ConfigError(
            "invariant violated at reservoir.kappa_over_J: kappa/J > 0 required"
        )
    if cfg.chi_over_J < 0:
        raise ConfigError("invariant violated at reservoir.chi_over_J: chi/J >= 0 required")
    if cfg.omega0_drive_over_J < 0:
        raise ConfigError(
            "invariant violated at reservoir.omega0_drive_over_J: Omega0/J >= 0 required"
        )
    return cfg


def _parse_evolution(doc: dict) -> EvolutionConfig:
    fields = ("tau_max", "rel_tol", "abs_tol", "residual_tol", "snapshot_taus")
    _check_unknown(doc, set(fields), "evolution")
    cfg = EvolutionConfig()
    for name in ("tau_max", "rel_tol", "residual_tol"):
        if name in doc:
            value = _require_number(doc[name], f"evolution.{name}")
            if not value > 0:
                raise ConfigError(
                    f"invariant violated at evolution.{name}: must be > 0"
                )
            cfg = replace(cfg, **{name: value})
    if "abs_tol" in doc and doc["abs_tol"] is not None:
        value = _require_number(doc["abs_tol"], "evolution.abs_tol")
        if not value > 0:
            raise ConfigError("invariant violated at evolution.abs_tol: must be > 0")
        cfg = replace(cfg, abs_tol=value)
    if "snapshot_taus" in doc:
        raw = doc["snapshot_taus"]
        if not isinstance(raw, list):
            raise ConfigError(
                f"type mismatch at evolution.snapshot_taus: expected a list, got {raw!r}"
            )
        taus = tuple(
            _require_number(t, f"evolution.snapshot_taus[{i}]")
            for i, t in enumerate(raw)
        )
        if any(t < 0 for t in taus):
            raise ConfigError(
                "invariant violated at evolution.snapshot_taus: times must be >= 0"
            )
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise ConfigError(
                "invariant violated at evolution.snapshot_taus: must be strictly increasing"
            )
        cfg = replace(cfg, snapshot_taus=taus)
    return cfg


def _parse_outputs(doc: dict) -> OutputConfig:
    _check_unknown(doc, {"directory", "report"}, "outputs")
    cfg = OutputConfig()
    if "directory" in doc and doc["directory"] is not None:
        cfg = replace(cfg, directory=_require_str(doc["directory"], "outputs.directory"))
    if "report" in doc:
        if not isinstance(doc["report"], bool):
            raise ConfigError(
                f"type mismatch at outputs.report: expected a bool, got {doc['report']!r}"
            )
        cfg = replace(cfg, report=doc["report"])
    return cfg


def parse_config_dict(doc: dict) -> RunConfig:
    if not isinstance(doc, dict):
        raise ConfigError(f"type mismatch at <root>: expected an object, got {doc!r}")
    _check_unknown(doc, {"lattice", "particles", "reservoir", "gamma_mode",
                         "evolution", "outputs"}, "")
    for section in ("lattice", "reservoir", "evolution", "outputs"):
        if section in doc and not isinstance(doc[section], dict):
            raise ConfigError(
                f"type mismatch at {section}: expected an object, got {doc[section]!r}"
            )
    cfg = RunConfig(
        lattice=_parse_lattice(doc.get("lattice", {})),
        reservoir=_parse_reservoir(doc.get("reservoir", {})),
        evolution=_parse_evolution(doc.get("evolution", {})),
        outputs=_parse_outputs(doc.get("outputs", {})),
    )
    if "particles" in doc:
        n = _require_number(doc["particles"], "particles")
        if not n > 0:
            raise ConfigError("invariant violated at particles: N > 0 required")
        cfg = replace(cfg, particles=n)
    if "gamma_mode" in doc:
        cfg = replace(cfg, gamma_mode=_require_str(doc["gamma_mode"], "gamma_mode",
                                                   GAMMA_MODES))
    return cfg


def parse_config(text: str) -> RunConfig:
    """Parse a JSON configuration document; '{}' yields the full defaults."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config_dict(doc)


def config_to_dict(cfg: RunConfig) -> dict:
    return {
        "lattice": {"L": cfg.lattice.L, "boundary": cfg.lattice.boundary},
        "particles": cfg.particles,
        "reservoir": {
            "chi_over_J": cfg.reservoir.chi_over_J,
            "omega0_drive_over_J": cfg.reservoir.omega0_drive_over_J,
            "delta_over_J": cfg.reservoir.delta_over_J,
            "kappa_over_J": cfg.reservoir.kappa_over_J,
        },
        "gamma_mode": cfg.gamma_mode,
        "evolution": {
            "tau_max": cfg.evolution.tau_max,
            "rel_tol": cfg.evolution.rel_tol,
            "abs_tol": cfg.evolution.abs_tol,
            "residual_tol": cfg.evolution.residual_tol,
            "snapshot_taus": list(cfg.evolution.snapshot_taus),
        },
        "outputs": {"directory": cfg.outputs.directory, "report": cfg.outputs.report},
    }


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(config_to_dict(cfg), indent=2, sort_keys=True)


def with_parameter(cfg: RunConfig, name: str, value) -> RunConfig:
    """Return a copy of cfg with one sweepable parameter replaced."""
    if name not in SWEEPABLE:
        raise ConfigError(
            f"unknown sweep parameter '{name}'; allowed: {', '.join(SWEEPABLE)}"
        )
    section, fld = SWEEPABLE[name]
    if name == "L":
        value = _require_number(value, name, integer=True)
        if value < 1:
            raise ConfigError("invariant violated at L: L >= 1 required")
    else:
        value = _require_number(value, name)
    if section is None:
        return replace(cfg, **{fld: value})
    sub = replace(getattr(cfg, section), **{fld: value})
    return replace(cfg, **{section: sub})


def parse_sweep_spec(text: str) -> SweepSpec:
    """Parse the JSON sweep description: one or two axes plus metrics."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"sweep spec is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("type mismatch at <root>: sweep spec must be an object")
    _check_unknown(doc, {"axis1", "axis2", "metrics"}, "")
    if "axis1" not in doc:
        raise ConfigError("sweep spec requires axis1")

    def parse_axis(axis_doc, path):
        if not isinstance(axis_doc, dict):
            raise ConfigError(f"type mismatch at {path}: expected an object")
        _check_unknown(axis_doc, {"name", "values"}, path)
        name = _require_str(axis_doc.get("name", ""), f"{path}.name", tuple(SWEEPABLE))
        raw = axis_doc.get("values")
        if not isinstance(raw, list) or not raw:
            raise ConfigError(f"invariant violated at {path}.values: non-empty list required")
        values = tuple(_require_number(v, f"{path}.values[{i}]") for i, v in enumerate(raw))
        return name, values

    a1_name, a1_values = parse_axis(doc["axis1"], "axis1")
    a2_name, a2_values = None, ()
    if "axis2" in doc and doc["axis2"] is not None:
        a2_name, a2_values = parse_axis(doc["axis2"], "axis2")
    metrics = METRIC_NAMES
    if "metrics" in doc:
        raw = doc["metrics"]
        if not isinstance(raw, list) or not raw:
            raise ConfigError("invariant violated at metrics: non-empty list required")
        for m in raw:
            if m not in METRIC_NAMES:
                raise ConfigError(
                    f"unknown field 'metrics.{m}'; allowed: {', '.join(METRIC_NAMES)}"
                )
        metrics = tuple(raw)
    return SweepSpec(axis1_name=a1_name, axis1_values=a1_values,
                     axis2_name=a2_name, axis2_values=a2_values, metrics=metrics)


def default_sweep_spec() -> SweepSpec:
    """12 x 12 detuning/decay grid covering the KL-divergence maps."""
    delta = tuple(-6.0 + 5.0 * i / 11.0 for i in range(12))
    kappa = tuple(0.5 + 5.5 * i / 11.0 for i in range(12))
    return SweepSpec(axis1_name="delta_over_J", axis1_values=delta,
                     axis2_name="kappa_over_J", axis2_values=kappa)
