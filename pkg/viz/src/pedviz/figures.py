"""Figure rendering: per-snapshot density heatmaps with geometry overlays,
fundamental-diagram curve plots, and mass-vs-time curves."""

import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import (diagram_files, parse_grid_file, read_metrics, read_run_meta,
                 snapshot_files)

KINDS = ("heatmaps", "diagrams", "mass_curve")


@dataclass
class FigureRequest:
    in_dir: str
    which: str
    out_dir: str
    scale_max: float = 1.0  # top of the density color scale

    def __post_init__(self):
        if self.which not in KINDS:
            raise ValueError(f"unknown figure kind {self.which!r}; expected {KINDS}")
        if self.scale_max <= 0:
            raise ValueError(f"scale_max must be positive, got {self.scale_max}")


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _overlay_geometry(ax, meta):
    """Draw obstacle rects solid and the target rect outlined."""
    scenario = meta.get("scenario", {})
    for rect in scenario.get("obstacles", []):
        xmin, xmax, ymin, ymax = rect
        ax.add_patch(plt.Rectangle((xmin, ymin), xmax - xmin, ymax - ymin,
                                   facecolor="black"))
    target = scenario.get("target")
    if target:
        xmin, xmax, ymin, ymax = target
        ax.add_patch(plt.Rectangle((xmin, ymin), xmax - xmin, ymax - ymin,
                                   fill=False, edgecolor="red", linewidth=1.5))


def render_heatmaps(request):
    """One raster image per snapshot; corrupt snapshots are skipped with a
    warning, and rendering nothing at all is an error."""
    out = Path(request.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = {}
    meta_path = Path(request.in_dir) / "run_meta.json"
    if meta_path.exists():
        meta = read_run_meta(meta_path)
    else:
        _warn(f"{meta_path} missing; rendering without geometry overlays")

    files = snapshot_files(request.in_dir)
    written = []
    for path in files:
        try:
            head, field = parse_grid_file(path.read_text())
            dx = float(head["dx"])
            ox, oy = (float(v) for v in head["origin"].split(","))
            ny, nx = field.shape
        except (ValueError, KeyError, OSError) as exc:
            _warn(f"skipping {path.name}: {exc}")
            continue
        fig, ax = plt.subplots(figsize=(5, 5))
        half = 0.5 * dx
        ax.imshow(field, origin="lower", cmap="viridis",
                  vmin=0.0, vmax=request.scale_max,
                  extent=(ox - half, ox + (nx - 1) * dx + half,
                          oy - half, oy + (ny - 1) * dx + half))
        _overlay_geometry(ax, meta)
        ax.set_title(f"density, t = {head.get('t', '?')}")
        ax.set_xlabel("x")
        ax.set_ylabel("y")
        dest = out / (path.stem + ".png")
        fig.savefig(dest, dpi=110)
        plt.close(fig)
        written.append(dest)
    if not written:
        raise RuntimeError(f"no snapshot rendered from {request.in_dir}")
    return written


def render_diagrams(request):
    """All diagram tables on one axes: speed vs density, one labeled curve
    per diagram_<name>.csv file."""
    files = diagram_files(request.in_dir)
    if not files:
        raise RuntimeError(f"no diagram_*.csv files in {request.in_dir}")
    fig, ax = plt.subplots(figsize=(6, 4))
    for path in files:
        rows = [line.split(",") for line in path.read_text().splitlines() if line]
        try:
            ms = np.array([float(r[0]) for r in rows])
            vs = np.array([float(r[1]) for r in rows])
        except (IndexError, ValueError) as exc:
            raise ValueError(f"{path.name}: {exc}") from exc
        label = path.stem.removeprefix("diagram_")
        ax.plot(ms, vs, label=label)
    ax.set_xlabel("density m")
    ax.set_ylabel("speed f(m)")
    ax.set_xlim(0, 1)
    ax.legend()
    out = Path(request.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dest = out / "diagrams.png"
    fig.savefig(dest, dpi=110)
    plt.close(fig)
    return [dest]


def render_mass_curve(request):
    """Remaining and absorbed mass against time on one axes."""
    cols = read_metrics(Path(request.in_dir) / "metrics.csv")
    for needed in ("t", "total_mass", "absorbed_cumulative"):
        if needed not in cols:
            raise ValueError(f"metrics.csv lacks column '{needed}'")
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(cols["t"], cols["total_mass"], label="remaining")
    ax.plot(cols["t"], cols["absorbed_cumulative"], label="absorbed")
    ax.set_xlabel("t")
    ax.set_ylabel("mass")
    ax.legend()
    out = Path(request.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    dest = out / "mass_curve.png"
    fig.savefig(dest, dpi=110)
    plt.close(fig)
    return [dest]


def render(request):
    if request.which == "heatmaps":
        return render_heatmaps(request)
    if request.which == "diagrams":
        return render_diagrams(request)
    return render_mass_curve(request)
