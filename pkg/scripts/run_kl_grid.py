#!/usr/bin/env python3
"""Detuning/decay-rate grid: per-cell KL divergences, ratio R, delta_n and
fitted temperature over the default 12x12 grid, using 4 worker processes.

Writes sweep.csv under out/kl_grid (or the directory given as argv[1]).
"""

import sys

from boson_kinetics.cli import main

out = sys.argv[1] if len(sys.argv) > 1 else "out/kl_grid"
raise SystemExit(main(["sweep", "--out", out, "--threads", "4"]))
