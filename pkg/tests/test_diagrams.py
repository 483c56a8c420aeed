import numpy as np
import pytest

from pedflow import DiagramSpec, diagram_table, slowness, speed
from pedflow.diagrams import KINDS, PM_COEFFS, raw_speed

DELTA = 1e-3


def spec(kind, **kw):
    return DiagramSpec(kind=kind, delta=DELTA, **kw)


def horner(coeffs, m):
    """Independent evaluation of a4 m^4 - a3 m^3 + a2 m^2 - a1 m + a0."""
    a4, a3, a2, a1, a0 = coeffs
    return (((a4 * m - a3) * m + a2) * m - a1) * m + a0


def test_f1_values():
    assert speed(spec("F1"), 0.7) == 1.0 - 0.7
    assert abs(speed(spec("F1"), 0.7) - 0.3) <= 1e-15
    assert speed(spec("F1"), 0.0) == 1.0
    assert speed(spec("F1"), 1.2) == DELTA  # truncation floor


def test_f2_values():
    f2 = spec("F2")  # alpha=1, k=0.2 defaults
    assert speed(f2, 0.2) == 1.0  # exponent zero
    assert raw_speed(f2, 1.0) == 0.0  # limit convention
    assert speed(f2, 1.0) == DELTA
    assert speed(f2, 0.0) == 1.0  # min(1, e^{0.2}) caps at 1


def test_f3_values():
    f3 = spec("F3")
    assert raw_speed(f3, 0.0) == 1.0  # limit convention
    assert speed(f3, 1.0) == DELTA
    assert 0 < raw_speed(f3, 0.5) < 1


def test_f4_endpoints():
    f4 = spec("F4")
    assert abs(speed(f4, 0.0) - 1.0) <= 1e-12
    assert abs(speed(f4, 1.0) - 4.0 / 51.0) <= 1e-12
    # cross-check against an independent polynomial evaluation
    for m in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert raw_speed(f4, m) == pytest.approx(horner(PM_COEFFS, m), abs=1e-13)


def test_f4_jams_past_one():
    f4 = spec("F4")
    # the quartic keeps falling past the nominal jam density and hits the
    # floor slightly above it, so oversaturated cells block their inflow
    assert speed(f4, 1.05) < 4.0 / 51.0
    assert speed(f4, 1.2) == DELTA
    assert speed(f4, 2.0) == speed(f4, 1.5)  # clipped before the spurious rise


def test_f5_cap_and_jam_value():
    f5 = spec("F5")
    assert raw_speed(f5, 1e-9) > f5.vmax  # unbounded as m -> 0 before capping
    assert speed(f5, 1e-9) == f5.vmax
    assert speed(f5, 1.0) == pytest.approx(f5.k1 / f5.k2 ** f5.beta)
    assert speed(f5, 1.0) > DELTA


def test_slowness_values():
    assert slowness(spec("F1"), 0.0) == 1.0
    assert slowness(spec("F1"), 1.0) == pytest.approx(1000.0)
    f5 = spec("F5", k1=1.0, k2=1.0, beta=0.25)
    assert slowness(f5, 0.5) == pytest.approx(0.5 ** 0.25)


def test_slowness_times_speed():
    ms = np.linspace(0, 1.3, 400)
    for kind in KINDS:
        s = spec(kind)
        assert np.max(np.abs(slowness(s, ms) * speed(s, ms) - 1.0)) <= 2e-16


def test_monotone_non_increasing_f1_to_f4():
    ms = np.linspace(0.0, 1.0, 1001)
    for kind in ("F1", "F2", "F3", "F4"):
        vs = speed(spec(kind), ms)
        assert np.all(np.diff(vs) <= 1e-12), kind


def test_speed_floor_and_unit_bound():
    ms = np.linspace(0.0, 2.0, 801)
    for kind in KINDS:
        vs = speed(spec(kind), ms)
        assert np.all(vs >= DELTA), kind
    for kind in ("F1", "F2", "F3", "F4"):
        on_unit = speed(spec(kind), np.linspace(0, 1, 801))
        assert np.all(on_unit <= 1.0 + 1e-12), kind


def test_diagram_table_examples():
    assert diagram_table(spec("F1"), 3) == [(0.0, 1.0), (0.5, 0.5), (1.0, DELTA)]
    t3 = diagram_table(spec("F3"), 2)
    assert t3[0] == (0.0, 1.0) and t3[1] == (1.0, DELTA)
    t4 = diagram_table(spec("F4"), 2)
    assert t4[0][1] == pytest.approx(1.0)
    assert t4[1][1] == pytest.approx(4.0 / 51.0)
    with pytest.raises(ValueError):
        diagram_table(spec("F1"), 1)


def test_spec_validation():
    with pytest.raises(ValueError):
        DiagramSpec(kind="F9")
    with pytest.raises(ValueError):
        DiagramSpec(kind="F1", delta=0.0)
    with pytest.raises(ValueError):
        DiagramSpec(kind="F2", k=1.5)
    with pytest.raises(ValueError):
        DiagramSpec(kind="F3", alpha=-1.0)
    with pytest.raises(ValueError):
        DiagramSpec(kind="F5", beta=0.7)
    with pytest.raises(ValueError):
        DiagramSpec(kind="F4", coeffs=(1.0, 2.0))
