#!/usr/bin/env python3
"""Reference run: relax the default configuration (L=100, N=50, Delta=-3J,
kappa=J) to its steady state and dump the noise spectrum.

Writes steady_state.csv, perturbative.csv, report.json and spectrum.csv
under out/reference (or the directory given as the first argument).
"""

import sys

from boson_kinetics.cli import main

out = sys.argv[1] if len(sys.argv) > 1 else "out/reference"
code = main(["steady", "--out", out])
if code == 0:
    code = main(["spectrum", "--out", out])
raise SystemExit(code)
