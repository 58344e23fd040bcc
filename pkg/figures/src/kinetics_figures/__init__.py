"""Figure rendering for the boson-kinetics CSV outputs: spec-driven line
plots, heatmaps, and snapshot overlays."""

from .figspec import FigureSpec, FigureSpecError, load_spec, parse_spec
from .render import render, render_heatmap, render_lines, render_snapshots

__all__ = [
    "FigureSpec",
    "FigureSpecError",
    "load_spec",
    "parse_spec",
    "render",
    "render_heatmap",
    "render_lines",
    "render_snapshots",
]
