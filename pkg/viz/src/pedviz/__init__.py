"""Post-processing for pedestrian-flow simulation outputs: density heatmaps
with geometry overlays, fundamental-diagram curves and mass-vs-time plots.

Consumes only the simulator's text outputs (metrics.csv, m_*.csv snapshot
grids, run_meta.json); the file formats are the contract.
"""

from .figures import FigureRequest, render, render_diagrams, render_heatmaps, \
    render_mass_curve
from .io import parse_grid_file, read_metrics, read_run_meta

__all__ = [
    "FigureRequest", "parse_grid_file", "read_metrics", "read_run_meta",
    "render", "render_diagrams", "render_heatmaps", "render_mass_curve",
]
