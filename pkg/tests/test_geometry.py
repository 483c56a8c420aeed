import numpy as np
import pytest

from pedflow import (FREE, OBSTACLE, TARGET, ConfigurationError, Rect,
                     basis_weights, build_grid, project_free,
                     rasterize_density, reflect)
from pedflow.geometry import reflect_array

DOMAIN = Rect(0, 1, 0, 1)
WALLS = [Rect(0.55, 0.6, 0, 0.05), Rect(0.55, 0.6, 0.2, 0.45),
         Rect(0.55, 0.6, 0.6, 1)]
TARGET_RECT = Rect(0.88, 0.92, 0.1, 0.95)


def test_rect_validation():
    with pytest.raises(ValueError):
        Rect(1, 0, 0, 1)
    with pytest.raises(ValueError):
        Rect.from_list([0, 1, 0])
    r = Rect.from_list([0, 1, 2, 3])
    assert r.as_list() == [0, 1, 2, 3]
    assert r.width == 1 and r.height == 1


def test_build_grid_coarse_target_between_nodes():
    # dx=0.5 puts nodes on a 3x3 lattice; no node falls inside the target
    with pytest.raises(ConfigurationError):
        build_grid(DOMAIN, [], TARGET_RECT, 0.5)


def test_build_grid_thin_obstacle_between_nodes():
    # at dx=0.25 no node of the 5x5 lattice lies inside the door-wall strip
    grid = build_grid(DOMAIN, [Rect(0.55, 0.6, 0, 0.05)], Rect(0.9, 1.0, 0, 1), 0.25)
    assert grid.n_nodes == 25
    assert not np.any(grid.status == OBSTACLE)
    assert np.all((grid.status == FREE) | (grid.status == TARGET))
    assert grid.cell_area == pytest.approx(0.25 ** 2)


def test_build_grid_paper_geometry():
    grid = build_grid(DOMAIN, WALLS, TARGET_RECT, 0.0077)
    assert (grid.nx, grid.ny) == (131, 131)
    assert grid.dx == pytest.approx(1 / 130)
    assert np.any(grid.status == OBSTACLE)
    assert np.any(grid.status == TARGET)
    # the two door gaps y in (0.05, 0.2) and (0.45, 0.6) stay open
    ix = int(round(0.575 / grid.dx))
    ys = grid.ys
    gap = (ys > 0.05) & (ys < 0.2)
    assert np.all(grid.status[gap, ix] == FREE)


def test_build_grid_rejects_bad_inputs():
    with pytest.raises(ValueError):
        build_grid(DOMAIN, [], TARGET_RECT, -0.1)
    # incompatible spacing across the two sides
    with pytest.raises(ConfigurationError):
        build_grid(Rect(0, 1, 0, 0.9), [], Rect(0.4, 0.6, 0.4, 0.6), 0.25)
    # target disjoint from the domain
    with pytest.raises(ConfigurationError):
        build_grid(DOMAIN, [], Rect(2, 3, 2, 3), 0.1)
    # target fully covered by an obstacle (walls win)
    with pytest.raises(ConfigurationError):
        build_grid(DOMAIN, [Rect(0.8, 1.0, 0, 1)], Rect(0.85, 0.95, 0.4, 0.6), 0.1)


def test_build_grid_deterministic():
    a = build_grid(DOMAIN, WALLS, TARGET_RECT, 0.0077)
    b = build_grid(DOMAIN, WALLS, TARGET_RECT, 0.0077)
    assert np.array_equal(a.status, b.status)
    assert a.dx == b.dx and a.origin == b.origin


def test_reflect_examples():
    assert reflect((0.5, 0.5), DOMAIN) == (0.5, 0.5)
    assert reflect((1.05, 0.5), DOMAIN) == pytest.approx((0.95, 0.5))
    assert reflect((-0.02, -0.03), DOMAIN) == pytest.approx((0.02, 0.03))
    # boundary points are fixed
    assert reflect((0.0, 1.0), DOMAIN) == (0.0, 1.0)


def test_reflect_array_counts_clamps():
    pts = np.array([[0.5, 0.5], [1.4, 0.5], [2.5, 0.5]])
    out, n_clamped = reflect_array(pts, DOMAIN)
    assert n_clamped == 1  # only the overshoot past the mirror image clamps
    assert out[1] == pytest.approx([0.6, 0.5])
    assert out[2] == pytest.approx([0.0, 0.5])  # mirror image -0.5, clamped
    assert np.all((out >= 0.0) & (out <= 1.0))


@pytest.fixture
def grid5():
    # dx = 0.25 keeps every node coordinate exactly representable
    return build_grid(DOMAIN, [], Rect(0.9, 1.05, 0, 1), 0.25)


def test_basis_weights_node_hit(grid5):
    entries = basis_weights((0.25, 0.75), grid5)
    assert entries == [(3 * grid5.nx + 1, 1.0)]


def test_basis_weights_cell_center(grid5):
    entries = basis_weights((0.375, 0.625), grid5)
    assert len(entries) == 4
    assert all(w == 0.25 for _, w in entries)


def test_basis_weights_edge_midpoint(grid5):
    entries = basis_weights((0.375, 0.75), grid5)
    assert len(entries) == 2
    assert all(w == 0.5 for _, w in entries)


def test_basis_weights_partition_of_unity(open_grid, rng):
    for _ in range(200):
        p = rng.uniform(0, 1, 2)
        entries = basis_weights(tuple(p), open_grid)
        ws = [w for _, w in entries]
        assert all(0 <= w <= 1 for w in ws)
        assert abs(sum(ws) - 1.0) <= 1e-12


def test_basis_weights_outside_domain(open_grid):
    with pytest.raises(ValueError):
        basis_weights((1.2, 0.5), open_grid)


def test_project_free_identity_in_free_space():
    grid = build_grid(DOMAIN, WALLS, TARGET_RECT, 0.0077)
    assert project_free((0.2, 0.5), grid) == (0.2, 0.5)


def test_project_free_wall_center_ties_to_lower_x():
    grid = build_grid(DOMAIN, WALLS, TARGET_RECT, 0.0077)
    # center of the middle wall segment: left and right faces tie at 0.025
    q = project_free((0.575, 0.325), grid)
    assert q[0] == pytest.approx(0.55, abs=1e-5)
    assert q[0] < 0.55  # nudged to the free side
    assert q[1] == pytest.approx(0.325)


def test_project_free_on_obstacle_face():
    grid = build_grid(DOMAIN, [Rect(0.2, 0.6, 0.2, 0.6)], Rect(0.9, 1.0, 0, 1), 0.1)
    # (0.6, 0.4) sits on the wall face and its (lower-tie) cell is solid
    q = project_free((0.6, 0.4), grid)
    assert 0.6 < q[0] <= 0.6 + 2e-7
    assert q[1] == pytest.approx(0.4)


def test_rasterize_full_coverage(open_grid):
    # datum covering every dual volume, including the half-cells at the edge
    m = rasterize_density([(Rect(-0.1, 1.1, -0.1, 1.1), 0.7)], open_grid)
    assert np.allclose(m, 0.7)
    # datum equal to the domain only covers half of each boundary dual cell
    m = rasterize_density([(DOMAIN, 0.7)], open_grid)
    assert np.allclose(m[1:-1, 1:-1], 0.7)
    assert m[0, 5] == pytest.approx(0.35)
    assert m[0, 0] == pytest.approx(0.175)


def test_rasterize_single_dual_cell(open_grid):
    g = open_grid
    h = 0.5 * g.dx
    m = rasterize_density([(Rect(0.5 - h, 0.5 + h, 0.5 - h, 0.5 + h), 1.0)], g)
    assert m[5, 5] == pytest.approx(1.0)
    assert np.sum(m) * g.cell_area == pytest.approx(g.cell_area)
    # shifted by half a spacing: mass splits between two nodes
    m = rasterize_density([(Rect(0.5, 0.5 + g.dx, 0.5 - h, 0.5 + h), 1.0)], g)
    assert m[5, 5] == pytest.approx(0.5)
    assert m[5, 6] == pytest.approx(0.5)


def test_rasterize_paper_initial_mass():
    grid = build_grid(DOMAIN, WALLS, TARGET_RECT, 0.0077)
    m = rasterize_density([(Rect(0.1, 0.3, 0.1, 0.9), 0.7)], grid)
    total = float(np.sum(m)) * grid.cell_area
    assert total == pytest.approx(0.7 * 0.2 * 0.8, abs=1e-12)
    assert np.all(m >= 0)


def test_rasterize_override_and_conservation(open_grid):
    g = open_grid
    regions = [(Rect(0.1, 0.7, 0.1, 0.7), 0.3), (Rect(0.4, 0.9, 0.4, 0.9), 0.9)]
    m = rasterize_density(regions, g)
    assert m[5, 5] == pytest.approx(0.9)  # inside both, later region wins
    assert m[2, 2] == pytest.approx(0.3)
    exact = 0.3 * 0.6 * 0.6 - 0.3 * 0.3 * 0.3 + 0.9 * 0.5 * 0.5
    assert float(np.sum(m)) * g.cell_area == pytest.approx(exact, abs=1e-12)


def test_rasterize_zeroes_obstacles_and_rejects_negative():
    grid = build_grid(DOMAIN, [Rect(0.4, 0.6, 0.4, 0.6)], Rect(0.9, 1.0, 0, 1), 0.1)
    m = rasterize_density([(Rect(-0.1, 1.1, -0.1, 1.1), 0.7)], grid)
    assert np.all(m[grid.status == OBSTACLE] == 0.0)
    with pytest.raises(ValueError):
        rasterize_density([(DOMAIN, -0.5)], grid)
