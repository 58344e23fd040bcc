"""Command-line interface.

Subcommands: steady, snapshots, sweep, spectrum, verify.
Exit codes: 0 success, 1 verification failure, 2 config error,
3 convergence/stiffness error, 4 I/O error.  The output directory is
--out if given, else $BOSON_KINETICS_OUT, else ./out.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import (
    RunConfig,
    default_sweep_spec,
    parse_config,
    parse_sweep_spec,
)
from .errors import ConfigError, ConvergenceError, StiffnessError
from .runner import run_single, run_snapshots, run_spectrum, run_sweep
from .verify import run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_IO = 4


def _add_common(parser):
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="JSON run configuration (defaults apply when omitted)")
    parser.add_argument("--out", metavar="DIR", default=None,
                        help="output directory (overrides $BOSON_KINETICS_OUT)")
    parser.add_argument("--threads", metavar="N", type=int, default=1,
                        help="parallel workers for sweep cells")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boson-kinetics",
        description="Scattering kinetics of bosons coupled to an engineered "
                    "driven-cavity reservoir",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("steady", "relax to the steady state and compare with the perturbative solution"),
        ("snapshots", "record distribution snapshots at the configured times"),
        ("sweep", "evaluate metrics over a parameter grid"),
        ("spectrum", "dump the noise spectrum and Stokes temperature on a grid"),
        ("verify", "run the built-in oracle suite"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        if name == "sweep":
            p.add_argument("--sweep", metavar="PATH", default=None,
                           help="JSON sweep spec (default: 12x12 detuning/decay grid)")
    return parser


def _load_config(path: str | None) -> RunConfig:
    if path is None:
        return parse_config("{}")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def _out_dir(args, cfg: RunConfig) -> Path:
    if args.out is not None:
        return Path(args.out)
    if cfg.outputs.directory is not None:
        return Path(cfg.outputs.directory)
    env = os.environ.get("BOSON_KINETICS_OUT")
    if env:
        return Path(env)
    return Path("out")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return EXIT_OK if run_verification() else EXIT_VERIFY_FAILED

        cfg = _load_config(args.config)
        out = _out_dir(args, cfg)
        if args.command == "steady":
            report = run_single(cfg, out)
            m = report["metrics"]
            print(f"steady state written to {out} "
                  f"(tau = {report['tau_final']:g}, residual = {report['residual']:.3e})")
            print(f"  KL(steady || deformed) = {m['kl']:.6e}")
            print(f"  KL(steady || BE)       = {m['kl_be']:.6e}  (R = {m['R']:.4g})")
            print(f"  delta_n = n_GS - n_high = {m['delta_n']:+.6g}")
            print(f"  n_high - n_GS (text convention) = {-m['delta_n']:+.6g}")
        elif args.command == "snapshots":
            paths = run_snapshots(cfg, out)
            print(f"wrote {len(paths)} snapshot files to {out}")
        elif args.command == "sweep":
            if args.sweep is not None:
                try:
                    spec = parse_sweep_spec(Path(args.sweep).read_text())
                except OSError as exc:
                    raise ConfigError(f"cannot read sweep spec {args.sweep}: {exc}")
            else:
                spec = default_sweep_spec()
            path = run_sweep(cfg, spec, out, workers=max(1, args.threads))
            print(f"sweep grid written to {path}")
        elif args.command == "spectrum":
            path = run_spectrum(cfg, out)
            print(f"spectrum written to {path}")
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, StiffnessError) as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
