"""Paths and scenario documents shared across the simulator test modules."""

from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
SCENARIO_FILE = REPO / "scenarios" / "evacuation.yaml"

TINY_SCENARIO = """\
domain: [0, 1, 0, 1]
target: [0.9, 1.05, 0, 1]
initial:
  - rect: [0.1, 0.4, 0.2, 0.8]
    value: 0.5
diagram:
  kind: F1
dx: 0.1
dt_factor: 0.5
T: 0.4
"""
