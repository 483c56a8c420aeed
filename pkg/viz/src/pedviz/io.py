"""Readers for the simulator's text outputs. The file formats are the
contract: no code is shared with the simulator package."""

import csv
import json
from pathlib import Path

import numpy as np


def parse_grid_file(text):
    """Comma-separated row-major grid with '#' key=value header lines;
    returns (meta dict, 2-D array)."""
    meta = {}
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key.strip()] = val.strip()
            continue
        try:
            rows.append([float(v) for v in line.split(",")])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    arr = np.array(rows)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError("no data rows")
    if "nx" in meta and arr.shape != (int(meta["ny"]), int(meta["nx"])):
        raise ValueError(
            f"expected {meta['ny']} rows of {meta['nx']} values, got {arr.shape}"
        )
    return meta, arr


def read_metrics(path):
    """metrics.csv as a dict of float column arrays."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise ValueError(f"{path}: empty metrics file")
        cols = {name: [] for name in reader.fieldnames}
        for rownum, row in enumerate(reader, start=2):
            for name in cols:
                try:
                    cols[name].append(float(row[name]))
                except (TypeError, ValueError) as exc:
                    raise ValueError(f"{path}: row {rownum}: {exc}") from exc
    return {name: np.array(vals) for name, vals in cols.items()}


def read_run_meta(path):
    return json.loads(Path(path).read_text())


def snapshot_files(in_dir):
    """Snapshot grids in step order."""
    return sorted(Path(in_dir).glob("m_*.csv"))


def diagram_files(in_dir):
    """Diagram-sample tables (lines of 'density,speed') in name order."""
    return sorted(Path(in_dir).glob("diagram_*.csv"))
