"""Conservative semi-Lagrangian scatter step: one Euler step of the
characteristics, reflection/projection back into the walkable domain, and
bilinear redistribution of each node's mass."""

import numpy as np

from . import diagrams
from .geometry import OBSTACLE, TARGET, project_free, reflect_array


def _sample(m, pts, grid):
    """Bilinear interpolation of a node field at arbitrary points (one point
    per row). Points are assumed to lie inside the closed domain."""
    ny, nx = grid.shape
    fx = (pts[:, 0] - grid.origin[0]) / grid.dx
    fy = (pts[:, 1] - grid.origin[1]) / grid.dx
    cx = np.clip(np.floor(fx).astype(np.int64), 0, nx - 2)
    cy = np.clip(np.floor(fy).astype(np.int64), 0, ny - 2)
    tx = np.clip(fx - cx, 0.0, 1.0)
    ty = np.clip(fy - cy, 0.0, 1.0)
    return (
        m[cy, cx] * (1.0 - tx) * (1.0 - ty)
        + m[cy, cx + 1] * tx * (1.0 - ty)
        + m[cy + 1, cx] * (1.0 - tx) * ty
        + m[cy + 1, cx + 1] * tx * ty
    )


def velocity_field(m, d, spec, grid):
    """Per-node velocity: truncated diagram speed times the unit descent
    direction; zero wherever the direction is zero and on target/obstacle
    nodes.

    The speed at a node is f evaluated on the density interpolated one grid
    spacing ahead of the node along its walking direction (follow-the-leader
    upwinding), not on the node's own value. Congestion information then
    propagates against the walking direction, which is the physical direction
    of jam waves: inflow into a saturating cell shuts off as that cell
    approaches the jam density, while a cell that has overshot the jam value
    still drains if the space ahead of it is free. Evaluating f on the node
    itself lacks both properties and lets converging flows push the density
    arbitrarily far past the jam value, where the truncation floor freezes it
    permanently. On smooth fields the two choices differ by O(dx).
    """
    ny, nx = grid.shape
    x0, y0 = grid.origin
    px = x0 + np.arange(nx)[None, :] * grid.dx + grid.dx * d[..., 0]
    py = y0 + np.arange(ny)[:, None] * grid.dx + grid.dx * d[..., 1]
    pts = np.stack([px.ravel(), py.ravel()], axis=1)
    pts, _ = reflect_array(pts, grid.domain)
    ahead = _sample(m, pts, grid).reshape(grid.shape)
    b = diagrams.speed(spec, ahead)[..., None] * d
    blocked = (grid.status == OBSTACLE) | (grid.status == TARGET)
    b[blocked] = 0.0
    return b


def step(m, b, grid, dt, diagnostics=None):
    """Advance the density one time step.

    For every loaded node, the characteristic foot x + dt*b is reflected at
    the outer boundary, pushed out of solid wall cells, and its mass is
    scattered onto the corners of the receiving cell with bilinear weights
    (all dual volumes share the same area, so the weights transfer mass
    directly). Weights landing on obstacle corners are redistributed among
    the free corners of the same cell.

    diagnostics, when given, is a dict accumulating the counters
    'cfl_warnings' and 'clamped_reflections'.
    """
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    ny, nx = grid.shape
    out = np.zeros_like(m)

    iy_src, ix_src = np.nonzero(m > 0)
    if len(ix_src) == 0:
        return out

    bmax = float(np.max(np.hypot(b[..., 0], b[..., 1])))
    if diagnostics is not None and dt * bmax >= grid.dx:
        diagnostics["cfl_warnings"] = diagnostics.get("cfl_warnings", 0) + 1

    # characteristic feet in index space: a zero velocity keeps the foot
    # exactly on its node, so the step is an exact identity there
    fx = ix_src + dt * b[iy_src, ix_src, 0] / grid.dx
    fy = iy_src + dt * b[iy_src, ix_src, 1] / grid.dx

    # mirror across the outer faces (index space coincides with physical
    # reflection on a uniform lattice); overshoots past the image clamp
    fx = np.where(fx < 0.0, -fx, fx)
    fx = np.where(fx > nx - 1.0, 2.0 * (nx - 1.0) - fx, fx)
    fy = np.where(fy < 0.0, -fy, fy)
    fy = np.where(fy > ny - 1.0, 2.0 * (ny - 1.0) - fy, fy)
    still_out = (fx < 0.0) | (fx > nx - 1.0) | (fy < 0.0) | (fy > ny - 1.0)
    n_clamped = int(np.count_nonzero(still_out))
    if n_clamped:
        fx = np.clip(fx, 0.0, nx - 1.0)
        fy = np.clip(fy, 0.0, ny - 1.0)
        if diagnostics is not None:
            diagnostics["clamped_reflections"] = (
                diagnostics.get("clamped_reflections", 0) + n_clamped
            )

    cx = np.clip(np.floor(fx).astype(np.int64), 0, nx - 2)
    cy = np.clip(np.floor(fy).astype(np.int64), 0, ny - 2)

    # feet whose whole cell is solid wall get projected out of it
    x0, y0 = grid.origin
    obst = grid.status == OBSTACLE
    solid = obst[cy, cx] & obst[cy, cx + 1] & obst[cy + 1, cx] & obst[cy + 1, cx + 1]
    for i in np.nonzero(solid)[0]:
        qx, qy = project_free(
            (x0 + fx[i] * grid.dx, y0 + fy[i] * grid.dx), grid
        )
        fx[i] = (qx - x0) / grid.dx
        fy[i] = (qy - y0) / grid.dx
        cx[i] = min(max(int(np.floor(fx[i])), 0), nx - 2)
        cy[i] = min(max(int(np.floor(fy[i])), 0), ny - 2)

    tx = np.clip(fx - cx, 0.0, 1.0)
    ty = np.clip(fy - cy, 0.0, 1.0)
    # bilinear weights arranged so each row sums to exactly 1
    w = np.empty((len(tx), 4))
    w[:, 3] = tx * ty
    w[:, 2] = ty - w[:, 3]
    w[:, 1] = tx - w[:, 3]
    w[:, 0] = 1.0 - w[:, 1] - w[:, 2] - w[:, 3]

    corner_iy = np.stack([cy, cy, cy + 1, cy + 1], axis=1)
    corner_ix = np.stack([cx, cx + 1, cx, cx + 1], axis=1)
    corner_free = ~obst[corner_iy, corner_ix]

    # redistribute obstacle-corner weights among the free corners of the cell
    partial = ~np.all(corner_free, axis=1)
    if np.any(partial):
        rows = np.nonzero(partial)[0]
        wf = w[rows] * corner_free[rows]
        wsum = wf.sum(axis=1)
        for i, r in enumerate(rows):
            if wsum[i] <= 0.0:
                # foot sits exactly on a solid cell edge: give everything to
                # the nearest free corner
                free_idx = np.nonzero(corner_free[r])[0]
                dist2 = (corner_ix[r, free_idx] - fx[r]) ** 2 + (
                    corner_iy[r, free_idx] - fy[r]
                ) ** 2
                wf[i] = 0.0
                wf[i, free_idx[np.argmin(dist2)]] = 1.0
            else:
                wf[i] /= wsum[i]
                # force an exact unit row sum after the renormalization
                lead = int(np.argmax(wf[i] > 0))
                wf[i, lead] = 1.0 - (wf[i].sum() - wf[i, lead])
        w[rows] = wf

    masses = m[iy_src, ix_src][:, None] * w
    flat = corner_iy * nx + corner_ix
    np.add.at(out.reshape(-1), flat.reshape(-1), masses.reshape(-1))
    return out


def absorb_target(m, grid):
    """Zero the density on target nodes; returns (new field, absorbed mass
    = sum of m*|E| removed)."""
    tgt = grid.status == TARGET
    absorbed = float(np.sum(m[tgt])) * grid.cell_area
    out = m.copy()
    out[tgt] = 0.0
    return out, absorbed
