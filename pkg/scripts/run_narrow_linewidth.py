#!/usr/bin/env python3
"""Narrow-linewidth transient runs (kappa = J/10): distribution snapshots
developing accumulation/depletion peaks at +/-Delta off the band edges.

One subdirectory per detuning under out/narrow_linewidth (or argv[1]);
each holds snapshot_tau*.csv plus the combined snapshots.csv.
"""

import json
import sys
import tempfile
from pathlib import Path

from boson_kinetics.cli import main

base = Path(sys.argv[1] if len(sys.argv) > 1 else "out/narrow_linewidth")
code = 0
for delta in (-3.0, -1.0, -0.5):
    doc = {
        "reservoir": {"delta_over_J": delta, "kappa_over_J": 0.1},
        "evolution": {"snapshot_taus": [0.0, 1.0, 3.0, 10.0]},
    }
    with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
        json.dump(doc, fh)
        cfg_path = fh.name
    code = main(["snapshots", "--config", cfg_path,
                 "--out", str(base / f"delta{delta:g}")])
    if code != 0:
        break
raise SystemExit(code)
