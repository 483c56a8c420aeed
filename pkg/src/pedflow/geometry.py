"""Discrete domain: uniform node lattice, obstacle/target masks, dual volumes,
reflection at the outer boundary and bilinear interpolation weights."""

from dataclasses import dataclass, field

import numpy as np

FREE, OBSTACLE, TARGET = 0, 1, 2

# relative pad used for node-in-rect status tests, so that nodes sitting
# exactly on a wall face (up to rounding) count as wall
_STATUS_PAD = 1e-9


class ConfigurationError(Exception):
    """Scenario or geometry input that cannot produce a usable grid."""


@dataclass(frozen=True)
class Rect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise ValueError(f"degenerate rectangle {self}")

    @property
    def width(self):
        return self.xmax - self.xmin

    @property
    def height(self):
        return self.ymax - self.ymin

    def contains(self, x, y, pad=0.0):
        """Closed containment test; works on scalars and arrays."""
        return (
            (x >= self.xmin - pad)
            & (x <= self.xmax + pad)
            & (y >= self.ymin - pad)
            & (y <= self.ymax + pad)
        )

    def intersects(self, other):
        return (
            self.xmin <= other.xmax
            and other.xmin <= self.xmax
            and self.ymin <= other.ymax
            and other.ymin <= self.ymax
        )

    def as_list(self):
        return [self.xmin, self.xmax, self.ymin, self.ymax]

    @staticmethod
    def from_list(vals):
        if len(vals) != 4:
            raise ValueError(f"rectangle needs 4 numbers, got {vals!r}")
        return Rect(float(vals[0]), float(vals[1]), float(vals[2]), float(vals[3]))


@dataclass(eq=False)
class Grid:
    """Uniform quadrilateral node lattice over a rectangular domain.

    Node (ix, iy) sits at origin + (ix*dx, iy*dx); arrays are indexed
    [iy, ix] so that flat index iy*nx + ix matches row-major snapshot
    files. Every dual control volume is the full dx*dx square centered
    at the node.
    """

    nx: int
    ny: int
    dx: float
    origin: tuple
    status: np.ndarray  # (ny, nx) int8 in {FREE, OBSTACLE, TARGET}
    obstacles: list = field(default_factory=list)  # source rects, for projection

    @property
    def shape(self):
        return (self.ny, self.nx)

    @property
    def n_nodes(self):
        return self.nx * self.ny

    @property
    def cell_area(self):
        return self.dx * self.dx

    @property
    def domain(self):
        x0, y0 = self.origin
        return Rect(x0, x0 + (self.nx - 1) * self.dx, y0, y0 + (self.ny - 1) * self.dx)

    @property
    def xs(self):
        return self.origin[0] + np.arange(self.nx) * self.dx

    @property
    def ys(self):
        return self.origin[1] + np.arange(self.ny) * self.dx

    def node_xy(self):
        """Coordinate arrays (X, Y), each of shape (ny, nx)."""
        return np.meshgrid(self.xs, self.ys)


def build_grid(domain, obstacles, target, dx):
    """Construct the masked lattice for a rectangular domain.

    Node counts round to the nearest integer and the spacing is re-derived
    as side/(n-1), so a nominal dx that does not divide the side exactly is
    accepted. Ties at shared rect edges resolve to Obstacle (walls win).
    """
    if dx <= 0:
        raise ValueError(f"dx must be positive, got {dx}")
    if not domain.intersects(target):
        raise ConfigurationError("target rectangle does not intersect the domain")

    nx = int(round(domain.width / dx)) + 1
    ny = int(round(domain.height / dx)) + 1
    if nx < 2 or ny < 2:
        raise ConfigurationError(f"dx={dx} too coarse for domain {domain}")
    dx_eff = domain.width / (nx - 1)
    dy_eff = domain.height / (ny - 1)
    if abs(dy_eff - dx_eff) > 1e-9 * dx_eff:
        raise ConfigurationError(
            f"dx={dx} yields anisotropic spacing ({dx_eff} vs {dy_eff}); "
            "pick dx compatible with both domain sides"
        )

    xs = domain.xmin + np.arange(nx) * dx_eff
    ys = domain.ymin + np.arange(ny) * dx_eff
    X, Y = np.meshgrid(xs, ys)

    pad = _STATUS_PAD * dx_eff
    status = np.full((ny, nx), FREE, dtype=np.int8)
    in_target = target.contains(X, Y, pad=pad)
    status[in_target] = TARGET
    for rect in obstacles:
        status[rect.contains(X, Y, pad=pad)] = OBSTACLE

    if not np.any(status == TARGET):
        raise ConfigurationError(
            "no target node: the target rectangle falls between grid nodes "
            "or is fully covered by obstacles"
        )
    if not np.any(status != OBSTACLE):
        raise ConfigurationError("every node is an obstacle")

    return Grid(nx=nx, ny=ny, dx=dx_eff, origin=(domain.xmin, domain.ymin),
                status=status, obstacles=list(obstacles))


def reflect(p, domain):
    """Mirror a point back into the closed domain across the violated faces.

    Points already inside are returned unchanged. If the mirror image still
    falls outside (step longer than the domain side), the point is clamped
    to the boundary; callers treating that as a CFL diagnostic should use
    reflect_array, which counts clamps.
    """
    q, clamped = reflect_array(np.asarray([p], dtype=float), domain)
    return (q[0, 0], q[0, 1])


def reflect_array(pts, domain):
    """Vectorized reflection; returns (reflected points, clamp count)."""
    out = np.array(pts, dtype=float)
    x, y = out[:, 0], out[:, 1]
    x[:] = np.where(x < domain.xmin, 2.0 * domain.xmin - x, x)
    x[:] = np.where(x > domain.xmax, 2.0 * domain.xmax - x, x)
    y[:] = np.where(y < domain.ymin, 2.0 * domain.ymin - y, y)
    y[:] = np.where(y > domain.ymax, 2.0 * domain.ymax - y, y)
    still_out = (x < domain.xmin) | (x > domain.xmax) | (y < domain.ymin) | (y > domain.ymax)
    n_clamped = int(np.count_nonzero(still_out))
    if n_clamped:
        x[:] = np.clip(x, domain.xmin, domain.xmax)
        y[:] = np.clip(y, domain.ymin, domain.ymax)
    return out, n_clamped


def _cell_of(p, grid):
    """Index (cx, cy) of the cell containing p, ties toward the lower cell."""
    fx = (p[0] - grid.origin[0]) / grid.dx
    fy = (p[1] - grid.origin[1]) / grid.dx
    cx = int(np.floor(fx))
    cy = int(np.floor(fy))
    # exact hit on an interior cell boundary belongs to the lower cell
    if cx == fx and cx > 0:
        cx -= 1
    if cy == fy and cy > 0:
        cy -= 1
    cx = min(max(cx, 0), grid.nx - 2)
    cy = min(max(cy, 0), grid.ny - 2)
    return cx, cy


def basis_weights(p, grid):
    """Bilinear corner weights of the cell containing p.

    Returns a list of (flat node index, weight) with zero weights dropped,
    so an exact node hit yields a single entry of weight 1. The point must
    lie in the closed domain (reflect first).
    """
    dom = grid.domain
    tol = 1e-12 * grid.dx
    if not dom.contains(p[0], p[1], pad=tol):
        raise ValueError(f"point {p} outside domain {dom}; reflect before interpolating")
    cx, cy = _cell_of(p, grid)
    tx = (p[0] - (grid.origin[0] + cx * grid.dx)) / grid.dx
    ty = (p[1] - (grid.origin[1] + cy * grid.dx)) / grid.dx
    tx = min(max(tx, 0.0), 1.0)
    ty = min(max(ty, 0.0), 1.0)
    w11 = tx * ty
    w10 = tx - w11
    w01 = ty - w11
    w00 = 1.0 - tx - ty + w11
    entries = []
    for (ix, iy, w) in (
        (cx, cy, w00),
        (cx + 1, cy, w10),
        (cx, cy + 1, w01),
        (cx + 1, cy + 1, w11),
    ):
        if w != 0.0:
            entries.append((iy * grid.nx + ix, w))
    return entries


def _rect_boundary_candidates(p, rect, eps):
    """Nearest-boundary points of one rect, nudged to the outside by eps."""
    x, y = p
    cands = []
    inside = rect.xmin < x < rect.xmax and rect.ymin < y < rect.ymax
    if inside:
        # one candidate per face, nudged along that face's outward normal
        cands.append(((rect.xmin - eps, y), x - rect.xmin))
        cands.append(((rect.xmax + eps, y), rect.xmax - x))
        cands.append(((x, rect.ymin - eps), y - rect.ymin))
        cands.append(((x, rect.ymax + eps), rect.ymax - y))
    else:
        qx = min(max(x, rect.xmin), rect.xmax)
        qy = min(max(y, rect.ymin), rect.ymax)
        d = float(np.hypot(x - qx, y - qy))
        if d > 0:
            ux, uy = (x - qx) / d, (y - qy) / d
            cands.append(((qx + eps * ux, qy + eps * uy), d))
        else:
            # p lies exactly on the rect boundary: nudge across the nearest face
            faces = [
                ((x - rect.xmin), (-1.0, 0.0)),
                ((rect.xmax - x), (1.0, 0.0)),
                ((y - rect.ymin), (0.0, -1.0)),
                ((rect.ymax - y), (0.0, 1.0)),
            ]
            dmin = min(f[0] for f in faces)
            for dist, (nx_, ny_) in faces:
                if dist == dmin:
                    cands.append(((x + eps * nx_, y + eps * ny_), 0.0))
    return cands


def project_free(p, grid):
    """Move a point out of solid obstacle regions.

    If the cell containing p has at least one non-obstacle corner the point
    is returned unchanged (the scatter step can redistribute to the free
    corners). Otherwise the point is replaced by the nearest point on the
    obstacle-union boundary, nudged to the free side by dx*1e-6; ties go to
    the lower x, then lower y.
    """
    cx, cy = _cell_of(p, grid)
    corners = grid.status[cy:cy + 2, cx:cx + 2]
    if np.any(corners != OBSTACLE):
        return (float(p[0]), float(p[1]))
    if not grid.obstacles:
        raise ConfigurationError("fully blocked cell but no obstacle rectangles recorded")

    eps = grid.dx * 1e-6
    dom = grid.domain
    best = None
    for rect in grid.obstacles:
        for (q, d) in _rect_boundary_candidates(p, rect, eps):
            qx = min(max(q[0], dom.xmin), dom.xmax)
            qy = min(max(q[1], dom.ymin), dom.ymax)
            if any(r.contains(qx, qy) for r in grid.obstacles):
                continue
            dd = float(np.hypot(qx - p[0], qy - p[1]))
            key = (dd, qx, qy)
            if best is None or key < best:
                best = key
    if best is None:
        raise ConfigurationError(f"no free point reachable from {p}")
    return (best[1], best[2])


def _cell_rect(grid, ix, iy):
    """Dual control volume of node (ix, iy): the full dx*dx square."""
    x = grid.origin[0] + ix * grid.dx
    y = grid.origin[1] + iy * grid.dx
    h = 0.5 * grid.dx
    return (x - h, x + h, y - h, y + h)


def _override_integral(cell, regions):
    """Integral over the cell of the piecewise-constant datum where later
    regions override earlier ones. Exact for axis-aligned rectangles."""
    xmin, xmax, ymin, ymax = cell
    clipped = []
    for rect, val in regions:
        cxmin, cxmax = max(xmin, rect.xmin), min(xmax, rect.xmax)
        cymin, cymax = max(ymin, rect.ymin), min(ymax, rect.ymax)
        if cxmin < cxmax and cymin < cymax:
            clipped.append((cxmin, cxmax, cymin, cymax, val))
    if not clipped:
        return 0.0
    xb = sorted({xmin, xmax, *(c[0] for c in clipped), *(c[1] for c in clipped)})
    yb = sorted({ymin, ymax, *(c[2] for c in clipped), *(c[3] for c in clipped)})
    total = 0.0
    for x0, x1 in zip(xb[:-1], xb[1:]):
        xm = 0.5 * (x0 + x1)
        for y0, y1 in zip(yb[:-1], yb[1:]):
            ym = 0.5 * (y0 + y1)
            for (cxmin, cxmax, cymin, cymax, val) in reversed(clipped):
                if cxmin <= xm <= cxmax and cymin <= ym <= cymax:
                    total += val * (x1 - x0) * (y1 - y0)
                    break
    return total


def rasterize_density(regions, grid):
    """Cell-average a piecewise-constant initial datum onto the lattice.

    Each node receives the exact area fraction of its dual volume covered
    by the datum, times the value; later regions override earlier ones on
    overlaps. Obstacle nodes are zeroed.
    """
    for _, val in regions:
        if val < 0:
            raise ValueError(f"negative density value {val}")
    m = np.zeros(grid.shape)
    if not regions:
        return m
    area = grid.cell_area
    # fast path: nodes touched by exactly one region get the plain overlap
    # fraction; nodes overlapped by several regions go through the exact
    # override integral
    frac = np.zeros(grid.shape)
    touched = np.zeros(grid.shape, dtype=np.int64)
    xs, ys = grid.xs, grid.ys
    h = 0.5 * grid.dx
    for rect, val in regions:
        ox = np.clip(np.minimum(xs + h, rect.xmax) - np.maximum(xs - h, rect.xmin), 0.0, None)
        oy = np.clip(np.minimum(ys + h, rect.ymax) - np.maximum(ys - h, rect.ymin), 0.0, None)
        f = np.outer(oy, ox) / area
        frac += f * val
        touched += (f > 0)
    m[:] = frac
    multi = np.argwhere(touched > 1)
    for iy, ix in multi:
        m[iy, ix] = _override_integral(_cell_rect(grid, ix, iy), regions) / area
    m[grid.status == OBSTACLE] = 0.0
    return m
