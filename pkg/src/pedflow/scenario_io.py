"""Scenario files (YAML), run outputs (metrics.csv, snapshot grids,
run_meta.json) and the parsers that round-trip them."""

import dataclasses
import json
from pathlib import Path

import numpy as np
import yaml

from .diagrams import PM_COEFFS, DiagramSpec
from .geometry import ConfigurationError, Rect
from .simulation import EVACUATION_FRACTION, Scenario


class ScenarioError(ConfigurationError):
    """Malformed scenario document; message carries the offending key."""


_TOP_KEYS = {
    "domain", "obstacles", "target", "initial", "diagram", "dx", "dt_factor",
    "T", "delta", "absorb", "snapshot_every", "eps_grad", "out_dir",
}
_REQUIRED = ("domain", "target", "initial", "diagram", "dx", "dt_factor", "T")

# per-kind diagram parameters: required ones must be present, optional ones
# have configuration defaults
_DIAGRAM_PARAMS = {
    "F1": ((), ()),
    "F2": (("alpha", "k"), ()),
    "F3": (("alpha",), ()),
    "F4": ((), ("a4", "a3", "a2", "a1", "a0")),
    "F5": ((), ("k1", "k2", "beta", "vmax")),
}


def fmt(x):
    """Shortest decimal that round-trips the float; '1' instead of '1.0'."""
    s = repr(float(x))
    return s[:-2] if s.endswith(".0") else s


def _number(doc, key, default=None):
    if key not in doc:
        if default is not None:
            return default
        raise ScenarioError(f"missing required key '{key}'")
    v = doc[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ScenarioError(f"key '{key}' must be a number, got {v!r}")
    return float(v)


def _rect(val, key):
    try:
        return Rect.from_list(val)
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"key '{key}': {exc}") from exc


def _diagram(doc, delta):
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ScenarioError("key 'diagram' must be a mapping with a 'kind'")
    kind = doc["kind"]
    if kind not in _DIAGRAM_PARAMS:
        raise ScenarioError(f"key 'diagram.kind': unknown kind {kind!r}")
    required, optional = _DIAGRAM_PARAMS[kind]
    allowed = {"kind", *required, *optional}
    for key in doc:
        if key not in allowed:
            raise ScenarioError(f"key 'diagram.{key}' is not valid for kind {kind}")
    for key in required:
        if key not in doc:
            raise ScenarioError(f"diagram kind {kind} requires key '{key}'")
    kwargs = {"kind": kind, "delta": delta}
    for key in ("alpha", "k", "k1", "k2", "beta", "vmax"):
        if key in doc:
            kwargs[key] = _number(doc, key)
    if kind == "F4":
        defaults = dict(zip(("a4", "a3", "a2", "a1", "a0"), PM_COEFFS))
        kwargs["coeffs"] = tuple(
            _number(doc, k, default=defaults[k]) for k in ("a4", "a3", "a2", "a1", "a0")
        )
    try:
        return DiagramSpec(**kwargs)
    except ValueError as exc:
        raise ScenarioError(f"key 'diagram': {exc}") from exc


def parse_scenario(text):
    """Parse a scenario document; returns (Scenario, out_dir or None)."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioError(f"not valid YAML: {exc}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a mapping")
    for key in doc:
        if key not in _TOP_KEYS:
            raise ScenarioError(f"unknown key '{key}'")
    for key in _REQUIRED:
        if key not in doc:
            raise ScenarioError(f"missing required key '{key}'")

    domain = _rect(doc["domain"], "domain")
    target = _rect(doc["target"], "target")
    obstacles = [
        _rect(r, f"obstacles[{i}]") for i, r in enumerate(doc.get("obstacles") or [])
    ]
    initial = []
    for i, entry in enumerate(doc["initial"]):
        if not isinstance(entry, dict) or set(entry) != {"rect", "value"}:
            raise ScenarioError(
                f"key 'initial[{i}]' must be a mapping with keys 'rect' and 'value'"
            )
        val = entry["value"]
        if not isinstance(val, (int, float)) or isinstance(val, bool) or val < 0:
            raise ScenarioError(f"key 'initial[{i}].value' must be a number >= 0")
        initial.append((_rect(entry["rect"], f"initial[{i}].rect"), float(val)))

    delta = _number(doc, "delta", default=1e-3)
    diagram = _diagram(doc["diagram"], delta)
    absorb = doc.get("absorb", True)
    if not isinstance(absorb, bool):
        raise ScenarioError(f"key 'absorb' must be true/false, got {absorb!r}")
    snapshot_every = doc.get("snapshot_every", 100)
    if not isinstance(snapshot_every, int) or snapshot_every < 1:
        raise ScenarioError(f"key 'snapshot_every' must be a positive integer")
    eps_grad = _number(doc, "eps_grad", default=-1.0)

    try:
        scenario = Scenario(
            domain=domain,
            obstacles=obstacles,
            target=target,
            initial_regions=initial,
            diagram=diagram,
            dx=_number(doc, "dx"),
            dt_factor=_number(doc, "dt_factor"),
            T=_number(doc, "T"),
            absorb=absorb,
            snapshot_every=snapshot_every,
            eps_grad=None if eps_grad < 0 else eps_grad,
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    out_dir = doc.get("out_dir")
    return scenario, out_dir


def scenario_to_dict(scenario):
    return {
        "domain": scenario.domain.as_list(),
        "obstacles": [r.as_list() for r in scenario.obstacles],
        "target": scenario.target.as_list(),
        "initial": [
            {"rect": r.as_list(), "value": v} for r, v in scenario.initial_regions
        ],
        "diagram": _diagram_to_dict(scenario.diagram),
        "dx": scenario.dx,
        "dt_factor": scenario.dt_factor,
        "T": scenario.T,
        "delta": scenario.diagram.delta,
        "absorb": scenario.absorb,
        "snapshot_every": scenario.snapshot_every,
        "eps_grad": scenario.eps_grad,
    }


def _diagram_to_dict(spec):
    d = {"kind": spec.kind}
    if spec.kind in ("F2", "F3"):
        d["alpha"] = spec.alpha
    if spec.kind == "F2":
        d["k"] = spec.k
    if spec.kind == "F4":
        d.update(zip(("a4", "a3", "a2", "a1", "a0"), spec.coeffs))
    if spec.kind == "F5":
        d.update(k1=spec.k1, k2=spec.k2, beta=spec.beta, vmax=spec.vmax)
    return d


def write_scenario(scenario):
    """Scenario as a YAML document that parse_scenario accepts."""
    return yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False)


def format_grid_file(values, grid, t, step):
    """Row-major comma-separated grid with '#' metadata header lines."""
    lines = [
        f"# nx={grid.nx}",
        f"# ny={grid.ny}",
        f"# dx={fmt(grid.dx)}",
        f"# origin={fmt(grid.origin[0])},{fmt(grid.origin[1])}",
        f"# t={fmt(t)}",
        f"# step={step}",
    ]
    for row in np.asarray(values):
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def parse_grid_file(text):
    """Inverse of format_grid_file; returns (meta dict, array)."""
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
    if "nx" in meta and arr.shape != (int(meta["ny"]), int(meta["nx"])):
        raise ValueError(
            f"expected {meta['ny']} rows of {meta['nx']} values, got shape {arr.shape}"
        )
    return meta, arr


def write_outputs(result, scenario, out_dir):
    """Write metrics.csv, snapshot grids and run_meta.json under out_dir."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    lines = ["step,t,total_mass,max_density,absorbed_cumulative"]
    for (k, t, total, peak, absorbed) in result.metrics:
        lines.append(f"{k},{fmt(t)},{fmt(total)},{fmt(peak)},{fmt(absorbed)}")
    (out / "metrics.csv").write_text("\n".join(lines) + "\n")

    written = [out / "metrics.csv"]
    for (k, t, field) in result.snapshots:
        path = out / f"m_{k:06d}.csv"
        path.write_text(format_grid_file(field, result.grid, t, k))
        written.append(path)

    grid = result.grid
    meta = {
        "scenario": scenario_to_dict(scenario),
        "resolved": {
            "dx_effective": grid.dx,
            "nx": grid.nx,
            "ny": grid.ny,
            "dt": result.dt,
            "n_steps": len(result.metrics) - 1,
            "evacuation_fraction": EVACUATION_FRACTION,
        },
        "diagnostics": result.diagnostics,
        "evacuation_time": result.evacuation_time,
    }
    meta_path = out / "run_meta.json"
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    written.append(meta_path)
    return written
