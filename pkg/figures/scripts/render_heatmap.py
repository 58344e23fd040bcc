#!/usr/bin/env python3
"""Render a heatmap figure from a JSON spec: render_heatmap.py <spec.json>"""

from kinetics_figures.render import main_for_kind

if __name__ == "__main__":
    raise SystemExit(main_for_kind("heatmap"))
