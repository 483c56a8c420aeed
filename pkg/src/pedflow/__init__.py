"""Macroscopic pedestrian-flow simulator.

A density field is transported toward a target region by a velocity field
derived from a congestion-weighted shortest-time equation: every step the
potential is re-solved by fast marching on the current density, its descent
direction is scaled by a fundamental diagram (density -> speed), and the
density is moved one conservative semi-Lagrangian step.
"""

from .diagrams import DiagramSpec, diagram_table, slowness, speed
from .eikonal import EikonalResult, direction_field, solve_eikonal
from .geometry import (FREE, OBSTACLE, TARGET, ConfigurationError, Grid, Rect,
                       basis_weights, build_grid, project_free,
                       rasterize_density, reflect)
from .scenario_io import parse_scenario, write_outputs, write_scenario
from .simulation import RunResult, Scenario, compare_diagrams, run
from .transport import absorb_target, step, velocity_field

__all__ = [
    "ConfigurationError", "DiagramSpec", "EikonalResult", "FREE", "Grid",
    "OBSTACLE", "Rect", "RunResult", "Scenario", "TARGET", "absorb_target",
    "basis_weights", "build_grid", "compare_diagrams", "diagram_table",
    "direction_field", "parse_scenario", "project_free", "rasterize_density",
    "reflect", "run", "slowness", "solve_eikonal", "speed", "step",
    "velocity_field", "write_outputs", "write_scenario",
]
