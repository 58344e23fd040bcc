#!/usr/bin/env python3
"""Render a lines figure from a JSON spec: render_lines.py <spec.json>"""

from kinetics_figures.render import main_for_kind

if __name__ == "__main__":
    raise SystemExit(main_for_kind("lines"))
