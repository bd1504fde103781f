"""Static figures from overlapnet CLI artifacts.

This package deliberately never imports overlapnet: it consumes only the
files the CLI writes (sweep/blocks JSON, edge lists), so the two packages
can be installed, versioned, and tested independently.
"""
from .io import FigureError, read_blocks, read_edge_list, read_sweep
from .layout import spring_layout
from .render import (FigureSpec, curve_points, panel_colors, plan_grid,
                     render_overlap_panels, render_sweep_curve)

__version__ = "0.1.0"

__all__ = [
    "FigureError",
    "FigureSpec",
    "curve_points",
    "panel_colors",
    "plan_grid",
    "read_blocks",
    "read_edge_list",
    "read_sweep",
    "render_overlap_panels",
    "render_sweep_curve",
    "spring_layout",
    "__version__",
]
