"""First-order fast-marching solver for |grad u| = s(x) with u = 0 on the
target set, and extraction of the normalized descent direction field."""

from dataclasses import dataclass

import numpy as np
from numba import njit

from .geometry import FREE, OBSTACLE, TARGET


@dataclass(eq=False)
class EikonalResult:
    """Solved potential: u is (ny, nx) with +inf on obstacles and unreachable
    nodes; acceptance_order lists the flat node indices in the order the
    front accepted them."""

    u: np.ndarray
    acceptance_order: np.ndarray


# --- array-backed binary heap keyed by (value, node index) -------------------
# lazy deletion: stale entries are skipped when popped

@njit(cache=True)
def _heap_less(keys, idxs, a, b):
    if keys[a] != keys[b]:
        return keys[a] < keys[b]
    return idxs[a] < idxs[b]


@njit(cache=True)
def _heap_push(keys, idxs, size, key, idx):
    i = size
    keys[i] = key
    idxs[i] = idx
    while i > 0:
        parent = (i - 1) // 2
        if _heap_less(keys, idxs, i, parent):
            keys[i], keys[parent] = keys[parent], keys[i]
            idxs[i], idxs[parent] = idxs[parent], idxs[i]
            i = parent
        else:
            break
    return size + 1


@njit(cache=True)
def _heap_pop(keys, idxs, size):
    key, idx = keys[0], idxs[0]
    size -= 1
    keys[0], idxs[0] = keys[size], idxs[size]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        smallest = i
        if left < size and _heap_less(keys, idxs, left, smallest):
            smallest = left
        if right < size and _heap_less(keys, idxs, right, smallest):
            smallest = right
        if smallest == i:
            break
        keys[i], keys[smallest] = keys[smallest], keys[i]
        idxs[i], idxs[smallest] = idxs[smallest], idxs[i]
        i = smallest
    return key, idx, size


@njit(cache=True)
def _upwind_value(u, accepted, status, nx, ny, j, hs):
    """Solve the upwind quadratic at flat node j from its smallest accepted
    axis neighbors; hs = dx * slowness_j."""
    iy = j // nx
    ix = j % nx
    a = np.inf  # horizontal
    if ix > 0 and accepted[j - 1]:
        a = u[j - 1]
    if ix < nx - 1 and accepted[j + 1] and u[j + 1] < a:
        a = u[j + 1]
    b = np.inf  # vertical
    if iy > 0 and accepted[j - nx]:
        b = u[j - nx]
    if iy < ny - 1 and accepted[j + nx] and u[j + nx] < b:
        b = u[j + nx]
    if a == np.inf and b == np.inf:
        return np.inf
    if a == np.inf or b == np.inf or abs(a - b) > hs:
        return min(a, b) + hs
    return 0.5 * (a + b + np.sqrt(2.0 * hs * hs - (a - b) * (a - b)))


@njit(cache=True)
def _fmm_kernel(nx, ny, h, s, status, u, order):
    n = nx * ny
    accepted = np.zeros(n, dtype=np.uint8)
    cap = 5 * n + 16
    keys = np.empty(cap, dtype=np.float64)
    idxs = np.empty(cap, dtype=np.int64)
    size = 0
    for j in range(n):
        u[j] = np.inf
        if status[j] == TARGET:
            u[j] = 0.0
            size = _heap_push(keys, idxs, size, 0.0, j)
    n_accepted = 0
    while size > 0:
        key, j, size = _heap_pop(keys, idxs, size)
        if accepted[j] or key > u[j]:
            continue
        accepted[j] = 1
        order[n_accepted] = j
        n_accepted += 1
        iy = j // nx
        ix = j % nx
        for d in range(4):
            if d == 0:
                ok = ix > 0
                nb = j - 1
            elif d == 1:
                ok = ix < nx - 1
                nb = j + 1
            elif d == 2:
                ok = iy > 0
                nb = j - nx
            else:
                ok = iy < ny - 1
                nb = j + nx
            if not ok or accepted[nb] or status[nb] != FREE:
                continue
            val = _upwind_value(u, accepted, status, nx, ny, nb, h * s[nb])
            if val < u[nb]:
                u[nb] = val
                size = _heap_push(keys, idxs, size, val, nb)
    return n_accepted


def solve_eikonal(grid, slowness_field):
    """Fast-marching solve of |grad u| = s on the masked lattice.

    Target nodes are accepted first with u = 0; obstacle nodes and free
    nodes cut off from the target keep u = +inf. Ties in the front are
    broken by node index, so the solve is deterministic.
    """
    if not np.any(grid.status == TARGET):
        raise ValueError("grid has no target node")
    s = np.ascontiguousarray(np.asarray(slowness_field, dtype=np.float64).reshape(-1))
    if s.size != grid.n_nodes:
        raise ValueError("slowness field does not match the grid")
    status = np.ascontiguousarray(grid.status.reshape(-1))
    u = np.empty(grid.n_nodes, dtype=np.float64)
    order = np.empty(grid.n_nodes, dtype=np.int64)
    n_acc = _fmm_kernel(grid.nx, grid.ny, grid.dx, s, status, u, order)
    return EikonalResult(u=u.reshape(grid.shape), acceptance_order=order[:n_acc].copy())


def direction_field(grid, result, eps_grad):
    """Unit descent direction -g/|g| from the upwind gradient of u.

    Per axis the derivative points toward the smaller neighbor (one-sided
    next to obstacles and the boundary, zero where no neighbor is smaller).
    Nodes with |g| < eps_grad, target nodes, obstacle nodes and unreachable
    nodes get the zero vector.
    """
    u = result.u
    ny, nx = u.shape
    h = grid.dx
    usable = (grid.status != OBSTACLE) & np.isfinite(u)
    big = np.inf
    uv = np.where(usable, u, big)

    left = np.full_like(uv, big)
    right = np.full_like(uv, big)
    down = np.full_like(uv, big)
    up = np.full_like(uv, big)
    left[:, 1:] = uv[:, :-1]
    right[:, :-1] = uv[:, 1:]
    down[1:, :] = uv[:-1, :]
    up[:-1, :] = uv[1:, :]

    # gradient component: positive when u decreases toward -x (smaller
    # neighbor on the left), negative when it decreases toward +x
    with np.errstate(invalid="ignore"):
        gx = np.zeros_like(uv)
        hmin = np.minimum(left, right)
        has_desc_x = usable & (hmin < uv)
        gx = np.where(has_desc_x & (left <= right), (uv - left) / h, gx)
        gx = np.where(has_desc_x & (right < left), -(uv - right) / h, gx)
        gy = np.zeros_like(uv)
        vmin = np.minimum(down, up)
        has_desc_y = usable & (vmin < uv)
        gy = np.where(has_desc_y & (down <= up), (uv - down) / h, gy)
        gy = np.where(has_desc_y & (up < down), -(uv - up) / h, gy)

    mag = np.hypot(gx, gy)
    live = usable & (grid.status != TARGET) & (mag >= eps_grad)
    d = np.zeros((ny, nx, 2))
    with np.errstate(invalid="ignore", divide="ignore"):
        d[..., 0] = np.where(live, -gx / mag, 0.0)
        d[..., 1] = np.where(live, -gy / mag, 0.0)
    return d
