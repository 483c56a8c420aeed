"""Fundamental diagrams: density -> walking speed, their truncation, and the
reciprocal slowness feeding the shortest-time equation."""

from dataclasses import dataclass, field

import numpy as np

KINDS = ("F1", "F2", "F3", "F4", "F5")

# quartic coefficients from the Predtechenskii-Milinskii fit
PM_COEFFS = (112.0 / 51.0, 380.0 / 51.0, 434.0 / 51.0, 213.0 / 51.0, 1.0)


@dataclass(frozen=True)
class DiagramSpec:
    """Which diagram to use and its parameters.

    delta is the truncation floor: the effective speed is max(delta, f(m)),
    keeping the slowness 1/f bounded in fully congested regions. The F5
    power-law defaults (k1, k2, beta, vmax) are configuration choices, not
    values from the literature.
    """

    kind: str
    delta: float = 1e-3
    alpha: float = 1.0      # F2, F3
    k: float = 0.2          # F2
    coeffs: tuple = field(default=PM_COEFFS)  # F4: (a4, a3, a2, a1, a0)
    k1: float = 0.5         # F5
    k2: float = 1.0         # F5
    beta: float = 0.25      # F5
    vmax: float = 2.0       # F5 speed cap (raw f5 blows up as m -> 0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown diagram kind {self.kind!r}; expected one of {KINDS}")
        if not (0.0 < self.delta < 1.0):
            raise ValueError(f"delta must lie in (0,1), got {self.delta}")
        if self.kind in ("F2", "F3") and self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.kind == "F2" and not (0.0 < self.k < 1.0):
            raise ValueError(f"k must lie in (0,1), got {self.k}")
        if self.kind == "F4" and len(self.coeffs) != 5:
            raise ValueError("F4 needs 5 coefficients (a4, a3, a2, a1, a0)")
        if self.kind == "F5":
            if not (0.0 < self.beta < 0.5):
                raise ValueError(f"beta must lie in (0, 1/2), got {self.beta}")
            if self.k1 <= 0 or self.k2 <= 0:
                raise ValueError("k1 and k2 must be positive")
            if self.vmax <= 0:
                raise ValueError(f"vmax must be positive, got {self.vmax}")


def raw_speed(spec, m):
    """Untruncated diagram value f(m); m may be a scalar or array.

    Arguments of F2 and F3 are clamped to [0,1] (their formulas change sign
    past the jam density and would report high speeds there); F1 is evaluated
    as written, so oversaturated densities give negative values and the
    truncation floor takes over. The F4 quartic is likewise evaluated past
    m=1, where it keeps falling and crosses zero slightly above the nominal
    jam density; its argument is only clipped at 1.5, beyond which the
    quartic would spuriously rise again. Removable singularities take their
    limit values: f2(1)=0, f3(0)=1.
    """
    m = np.asarray(m, dtype=float)
    scalar = m.ndim == 0
    m = np.atleast_1d(m)
    if spec.kind == "F1":
        out = 1.0 - m
    elif spec.kind == "F2":
        mc = np.clip(m, 0.0, 1.0)
        with np.errstate(divide="ignore"):
            expo = np.where(mc < 1.0, -spec.alpha * (mc - spec.k) / (1.0 - mc), -np.inf)
        out = np.minimum(1.0, np.exp(expo))
    elif spec.kind == "F3":
        mc = np.clip(m, 0.0, 1.0)
        with np.errstate(divide="ignore"):
            expo = np.where(mc > 0.0, -spec.alpha * (1.0 - mc) / mc, -np.inf)
        out = 1.0 - np.exp(expo)
    elif spec.kind == "F4":
        mc = np.clip(m, 0.0, 1.5)
        a4, a3, a2, a1, a0 = spec.coeffs
        out = np.polyval([a4, -a3, a2, -a1, a0], mc)
    else:  # F5
        with np.errstate(divide="ignore"):
            out = np.where(m > 0.0, spec.k1 / (spec.k2 * np.maximum(m, 1e-300)) ** spec.beta, np.inf)
    return out.item() if scalar else out


def speed(spec, m):
    """Truncated walking speed max(delta, f(m)), capped at vmax for F5."""
    out = raw_speed(spec, m)
    if spec.kind == "F5":
        out = np.minimum(out, spec.vmax)
    return np.maximum(spec.delta, out)


def slowness(spec, m):
    """Reciprocal speed 1/max(delta, f(m)); finite thanks to the floor."""
    return 1.0 / speed(spec, m)


def diagram_table(spec, n):
    """n equally spaced (m, speed) samples on [0, 1]."""
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    ms = np.linspace(0.0, 1.0, n)
    vs = speed(spec, ms)
    return list(zip(ms.tolist(), np.atleast_1d(vs).tolist()))
