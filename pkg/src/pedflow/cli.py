"""Command-line interface: run a scenario, dump a one-shot potential solve,
or print fundamental-diagram samples."""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import diagrams, simulation
from .diagrams import DiagramSpec
from .eikonal import direction_field, solve_eikonal
from .geometry import OBSTACLE, ConfigurationError, build_grid, rasterize_density
from .scenario_io import (ScenarioError, fmt, format_grid_file, parse_scenario,
                          write_outputs)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2


def _load_scenario(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}") from exc
    return parse_scenario(text)


def _cmd_run(args):
    scenario, out_dir = _load_scenario(args.scenario)
    out = args.out or out_dir or "out"
    result = simulation.run(scenario)
    written = write_outputs(result, scenario, out)
    print(f"wrote {len(written)} files to {out}")
    if result.evacuation_time is not None:
        print(f"evacuation_time={fmt(result.evacuation_time)}")
    return EXIT_OK


def _cmd_eikonal(args):
    scenario, _ = _load_scenario(args.scenario)
    grid = build_grid(scenario.domain, scenario.obstacles, scenario.target, scenario.dx)
    m = rasterize_density(scenario.initial_regions, grid)
    s = diagrams.slowness(scenario.diagram, m)
    s[grid.status == OBSTACLE] = np.inf
    pot = solve_eikonal(grid, s)
    d = direction_field(grid, pot, scenario.eps_grad)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "u.csv").write_text(format_grid_file(pot.u, grid, 0.0, 0))
    (out / "dir_x.csv").write_text(format_grid_file(d[..., 0], grid, 0.0, 0))
    (out / "dir_y.csv").write_text(format_grid_file(d[..., 1], grid, 0.0, 0))
    print(f"wrote u.csv, dir_x.csv, dir_y.csv to {out}")
    return EXIT_OK


def _cmd_diagram_table(args):
    kwargs = {"kind": args.kind, "delta": args.delta}
    for name in ("alpha", "k", "k1", "k2", "beta", "vmax"):
        val = getattr(args, name)
        if val is not None:
            kwargs[name] = val
    coeffs = (args.a4, args.a3, args.a2, args.a1, args.a0)
    if any(c is not None for c in coeffs):
        defaults = diagrams.PM_COEFFS
        kwargs["coeffs"] = tuple(
            c if c is not None else d for c, d in zip(coeffs, defaults)
        )
    try:
        spec = DiagramSpec(**kwargs)
        table = diagrams.diagram_table(spec, args.n)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    for m, v in table:
        print(f"{fmt(m)},{fmt(v)}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pedflow",
        description="Macroscopic pedestrian-flow simulator (density transport "
        "coupled to a congestion-weighted shortest-time field).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario and write outputs")
    p_run.add_argument("--scenario", required=True, help="scenario YAML file")
    p_run.add_argument("--out", help="output directory (default: scenario out_dir or 'out')")
    p_run.set_defaults(func=_cmd_run)

    p_eik = sub.add_parser(
        "eikonal", help="solve the potential once on the initial density and dump it"
    )
    p_eik.add_argument("--scenario", required=True)
    p_eik.add_argument("--out", required=True)
    p_eik.set_defaults(func=_cmd_eikonal)

    p_tab = sub.add_parser(
        "diagram-table", help="print (density, speed) samples of one diagram"
    )
    p_tab.add_argument("--kind", required=True, choices=diagrams.KINDS)
    p_tab.add_argument("--n", type=int, default=101)
    p_tab.add_argument("--delta", type=float, default=1e-3)
    for name in ("alpha", "k", "k1", "k2", "beta", "vmax",
                 "a4", "a3", "a2", "a1", "a0"):
        p_tab.add_argument(f"--{name}", type=float, default=None)
    p_tab.set_defaults(func=_cmd_diagram_table)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
