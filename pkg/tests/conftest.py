import numpy as np
import pytest

from pedflow import Rect, build_grid


@pytest.fixture
def open_grid():
    """Obstacle-free 11x11 grid on [0,1]^2 with the target on the right edge."""
    return build_grid(Rect(0, 1, 0, 1), [], Rect(0.95, 1.05, 0, 1), 0.1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
