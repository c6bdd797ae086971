"""Independent ground-truth generators.

Three routes that do not share code with the solver: the closed-form area
of the regular polygon (optimal for odd n), central finite differences
for derivative checks, and an exhaustive grid search for tiny n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "OracleMethod",
    "OracleResult",
    "regular_polygon_area",
    "fd_check",
    "grid_search_small",
]


class OracleMethod(str, Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite_difference"
    GRID_SEARCH = "grid_search"


@dataclass(frozen=True)
class OracleResult:
    value: float
    method: OracleMethod
    resolution: float = 0.0

    def __post_init__(self):
        if self.method is not OracleMethod.ANALYTIC and self.resolution <= 0:
            raise ValueError("non-analytic oracle needs a positive resolution")


def regular_polygon_area(n: int) -> float:
    """Area of the regular n-gon (odd n) scaled to unit diameter.

    For odd n the longest diagonal spans 2R cos(pi/(2n)); setting it to 1
    gives area n sin(2pi/n) / (8 cos^2(pi/(2n))).
    """
    if n < 3 or n % 2 == 0:
        raise ValueError(f"regular-polygon oracle applies to odd n >= 3, got {n}")
    return n * math.sin(2 * math.pi / n) / (8 * math.cos(math.pi / (2 * n)) ** 2)


def fd_check(f, grad_f, point, step: float = 1e-6) -> float:
    """Max relative error between grad_f and central differences of f.

    Relative error denominator is max(1, |analytic component|).
    """
    if step <= 0:
        raise ValueError("step must be positive")
    x = np.asarray(point, dtype=float)
    analytic = np.asarray(grad_f(x), dtype=float)
    worst = 0.0
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = step
        fd = (f(x + e) - f(x - e)) / (2 * step)
        err = abs(fd - analytic[i]) / max(1.0, abs(analytic[i]))
        worst = max(worst, err)
    return worst


def _gap_values(step: float) -> np.ndarray:
    """Grid of candidate consecutive-angle gaps: multiples of step in [0, pi)."""
    return step * np.arange(int(math.pi / step) + 1)


def _radius_grid(step: float) -> np.ndarray:
    k = int(round(1.0 / step))
    return np.linspace(0.0, k * step, k + 1)


def _max_partner_radius(r: np.ndarray, gap: float, rad_grid: np.ndarray) -> np.ndarray:
    """Per radius in r: largest grid radius s with dist(r, s; gap)^2 <= 1.

    The feasible s-interval always contains 0 (r <= 1), so it is [0, hi].
    """
    c = math.cos(gap)
    # s^2 - 2 r c s + r^2 - 1 <= 0  =>  s <= r c + sqrt(1 - r^2 (1 - c^2))
    disc = 1.0 - r * r * (1.0 - c * c)
    hi = r * c + np.sqrt(np.maximum(disc, 0.0))
    hi = np.clip(hi, 0.0, rad_grid[-1])
    step = rad_grid[1] - rad_grid[0]
    # snap down to the grid, tolerating roundoff at exact boundaries
    return step * np.floor(hi / step + 1e-12)


def grid_search_small(n: int, step: float) -> OracleResult:
    """Exhaustive search over grid polygons for n in {3, 4, 5}.

    Angles are enumerated through their consecutive gaps (the area and all
    constraints depend only on angle differences), radii over multiples of
    step in [0, 1]; the best feasible area is a lower bound on the optimum.
    """
    if n > 5:
        raise ValueError("grid search is limited to n <= 5")
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if not (0.01 <= step <= 0.1):
        raise ValueError("step must lie in [0.01, 0.1]")

    gaps = _gap_values(step)
    rad = _radius_grid(step)
    best = 0.0

    if n == 3:
        for g1 in gaps:
            s1 = math.sin(g1)
            if s1 <= 0:
                continue
            r2max = _max_partner_radius(rad, g1, rad)
            cand = 0.5 * s1 * rad * r2max
            best = max(best, float(cand.max()))
    elif n == 4:
        for g1 in gaps:
            u1 = _max_partner_radius(rad, g1, rad)   # r1 cap given r2
            s1 = math.sin(g1)
            for g2 in gaps:
                if g1 + g2 >= math.pi:
                    break
                s2 = math.sin(g2)
                if s1 + s2 <= 0:
                    continue
                u3 = _max_partner_radius(rad, g2, rad)   # r3 cap given r2
                v3 = _max_partner_radius(rad, g1 + g2, rad)  # r3 cap given r1
                # score(r2) = r2 * max over r1 of (r1 s1 + r3(r1) s2)
                r1 = rad[None, :]                        # columns: r1 grid
                r1_ok = r1 <= u1[:, None] + 1e-15        # rows: r2 grid
                r3 = np.minimum(u3[:, None], v3[None, :])
                inner = np.where(r1_ok, r1 * s1 + r3 * s2, -1.0)
                cand = rad * inner.max(axis=1)
                best = max(best, 0.5 * float(cand.max()))
    else:
        for g1 in gaps:
            s1 = math.sin(g1)
            u1 = _max_partner_radius(rad, g1, rad)       # r1 cap given r2
            for g2 in gaps:
                if g1 + g2 >= math.pi:
                    break
                w1 = _max_partner_radius(rad, g1 + g2, rad)  # r1 cap given r3
                for g3 in gaps:
                    if g1 + g2 + g3 >= math.pi:
                        break
                    s3 = math.sin(g3)
                    u4 = _max_partner_radius(rad, g3, rad)       # r4 | r3
                    w4 = _max_partner_radius(rad, g2 + g3, rad)  # r4 | r2
                    v4 = _max_partner_radius(rad, g1 + g2 + g3, rad)  # r4 | r1
                    s2 = math.sin(g2)
                    d23 = _max_partner_radius(rad, g2, rad)      # r3 | r2
                    # axes: a = r2 index, b = r3 index, c = r1 index
                    r2 = rad[:, None, None]
                    r3 = rad[None, :, None]
                    r1 = rad[None, None, :]
                    ok = (r3 <= d23[:, None, None] + 1e-15) & (
                        r1 <= np.minimum(u1[:, None, None], w1[None, :, None]) + 1e-15
                    )
                    r4 = np.minimum(
                        np.minimum(u4[None, :, None], w4[:, None, None]),
                        v4[None, None, :],
                    )
                    val = r1 * r2 * s1 + r2 * r3 * s2 + r3 * r4 * s3
                    val = np.where(ok, val, -1.0)
                    best = max(best, 0.5 * float(val.max()))

    return OracleResult(value=best, method=OracleMethod.GRID_SEARCH, resolution=step)
