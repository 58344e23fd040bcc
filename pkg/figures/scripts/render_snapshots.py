#!/usr/bin/env python3
"""Render a snapshots figure from a JSON spec: render_snapshots.py <spec.json>"""

from kinetics_figures.render import main_for_kind

if __name__ == "__main__":
    raise SystemExit(main_for_kind("snapshots"))
