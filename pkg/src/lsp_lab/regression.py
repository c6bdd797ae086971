"""Asymptotic regression of polygon areas: A(n) ~ pi/4 + c1/n + c2/n^2 + c3/n^3,
fitted separately for even and odd n with the pi/4 intercept fixed."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .experiments import QUARTER_PI, SweepRecord

__all__ = ["RegressionFit", "fit", "predict", "goodness"]


@dataclass(frozen=True)
class RegressionFit:
    parity: str
    c1: float
    c2: float
    c3: float
    n_min: int
    n_max: int
    r_squared: float
    coefficient_p_values: tuple[float, float, float]
    residual_max: float

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return (self.c1, self.c2, self.c3)


def _parity_filter(records: list[SweepRecord], parity: str):
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    want = 0 if parity == "even" else 1
    bad = sorted({rec.n for rec in records if rec.n % 2 != want})
    if bad:
        raise ValueError(f"records of wrong parity present: n={bad}")
    pts = sorted({(rec.n, rec.objective) for rec in records})
    if len(pts) < 4:
        raise ValueError(f"need at least 4 distinct n, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=float)
    areas = np.array([p[1] for p in pts])
    return ns, areas


def fit(records: list[SweepRecord], parity: str) -> RegressionFit:
    """OLS of (A(n) - pi/4) on {1/n, 1/n^2, 1/n^3}, no intercept.

    Coefficient p-values come from the standard t-statistics of the
    no-intercept linear model.
    """
    ns, areas = _parity_filter(records, parity)
    y = areas - QUARTER_PI
    design = np.column_stack((1.0 / ns, ns**-2.0, ns**-3.0))

    coeffs, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        raise ValueError("rank-deficient design: need at least 3 distinct n")

    resid = y - design @ coeffs
    dof = len(ns) - 3
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot

    if dof > 0 and ss_res > 0:
        sigma2 = ss_res / dof
        cov = sigma2 * np.linalg.inv(design.T @ design)
        t_stats = coeffs / np.sqrt(np.diag(cov))
        p_values = 2.0 * stats.t.sf(np.abs(t_stats), dof)
    else:
        # interpolating fit: t-statistics degenerate, residual is zero
        p_values = np.zeros(3)

    return RegressionFit(
        parity=parity,
        c1=float(coeffs[0]),
        c2=float(coeffs[1]),
        c3=float(coeffs[2]),
        n_min=int(ns[0]),
        n_max=int(ns[-1]),
        r_squared=float(r_squared),
        coefficient_p_values=tuple(float(p) for p in p_values),
        residual_max=float(np.max(np.abs(resid))),
    )


def predict(regression: RegressionFit, n: int) -> float:
    """Evaluate the fitted model at n, summing smallest terms first."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    want = 0 if regression.parity == "even" else 1
    if n % 2 != want:
        raise ValueError(
            f"n={n} does not match the {regression.parity}-parity fit"
        )
    return math.fsum(
        [regression.c3 / n**3, regression.c2 / n**2, regression.c1 / n, QUARTER_PI]
    )


def goodness(regression: RegressionFit, records: list[SweepRecord]) -> dict:
    """Residual diagnostics of a fit against a record set."""
    ns, areas = _parity_filter(records, regression.parity)
    preds = np.array([predict(regression, int(n)) for n in ns])
    resid = areas - preds
    ss_res = float(resid @ resid)
    ss_tot = float(np.sum((areas - areas.mean()) ** 2))
    return {
        "r_squared": 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot,
        "residual_max": float(np.max(np.abs(resid))),
        "residuals": [
            {"n": int(n), "residual": float(r)} for n, r in zip(ns, resid)
        ],
    }
