"""Largest-small-polygon optimization models in polar coordinates.

A candidate polygon with n vertices is described by polar radii r_1..r_n
and angles theta_1..theta_n, with the last vertex pinned at the origin
(r_n = 0, theta_n = pi).  The objective is the polygon area; constraints
keep every pairwise vertex distance at most 1 (unit diameter) and the
angles ordered.  The tightened variant additionally bounds consecutive
angle gaps from below (even n) or pins the angles outright (odd n).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "Variant",
    "PolygonConfig",
    "ModelSpec",
    "NlpProblem",
    "build_problem",
    "area",
    "area_gradient",
    "pair_distance_sq",
    "initial_point",
    "max_violation",
]

TOL_FEAS = 1e-8


class Variant(str, Enum):
    STANDARD = "standard"
    TIGHTENED = "tightened"


@dataclass(frozen=True)
class PolygonConfig:
    """Polar-coordinate polygon: radii and angles, last vertex at origin."""

    n: int
    r: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        th = np.asarray(self.theta, dtype=float)
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")
        if r.shape != (self.n,) or th.shape != (self.n,):
            raise ValueError("r and theta must both have length n")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "theta", th)

    def vertices_xy(self) -> np.ndarray:
        """Cartesian vertex coordinates, shape (n, 2)."""
        return np.column_stack(
            (self.r * np.cos(self.theta), self.r * np.sin(self.theta))
        )

    def is_feasible(self, tol: float = TOL_FEAS) -> bool:
        """Ordered angles, box bounds, and all pairwise distances <= 1 + tol."""
        if abs(self.r[-1]) > tol or abs(self.theta[-1] - math.pi) > tol:
            return False
        if np.any(self.r < -tol) or np.any(self.r > 1 + tol):
            return False
        if np.any(self.theta < -tol) or np.any(self.theta > math.pi + tol):
            return False
        if np.any(np.diff(self.theta[:-1]) < -tol):
            return False
        for i in range(1, self.n):
            for j in range(i + 1, self.n + 1):
                if pair_distance_sq(self, i, j) > 1 + tol:
                    return False
        return True


@dataclass(frozen=True)
class ModelSpec:
    """Which model instance to build: size, variant, optional symmetry."""

    n: int
    variant: Variant = Variant.STANDARD
    symmetry: bool = False

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool):
            raise TypeError(f"n must be an integer, got {self.n!r}")
        if self.n < 3:
            raise ValueError(f"need n >= 3, got {self.n}")
        if self.symmetry and self.n % 2 != 0:
            raise ValueError("symmetry reduction only applies to even n")
        object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def parity(self) -> str:
        return "even" if self.n % 2 == 0 else "odd"


def area(config: PolygonConfig) -> float:
    """Polygon area: (1/2) sum r_i r_{i+1} sin(theta_{i+1} - theta_i)."""
    r, th = config.r, config.theta
    return 0.5 * float(np.sum(r[:-1] * r[1:] * np.sin(np.diff(th))))


def area_gradient(config: PolygonConfig) -> np.ndarray:
    """Exact area partials w.r.t. the free r_1..r_{n-1}, theta_1..theta_{n-1}.

    Returned layout matches the standard problem variable vector:
    first the n-1 radii, then the n-1 angles.
    """
    n = config.n
    r, th = config.r, config.theta
    dth = np.diff(th)           # dth[i] = theta_{i+2} - theta_{i+1}, 0-based
    s, c = np.sin(dth), np.cos(dth)

    dr = np.zeros(n)
    dt = np.zeros(n)
    # term i (0-based) is (1/2) r_i r_{i+1} sin(th_{i+1} - th_i)
    np.add.at(dr, np.arange(n - 1), 0.5 * r[1:] * s)
    np.add.at(dr, np.arange(1, n), 0.5 * r[:-1] * s)
    np.add.at(dt, np.arange(n - 1), -0.5 * r[:-1] * r[1:] * c)
    np.add.at(dt, np.arange(1, n), 0.5 * r[:-1] * r[1:] * c)
    return np.concatenate((dr[:-1], dt[:-1]))


def pair_distance_sq(config: PolygonConfig, i: int, j: int) -> float:
    """Squared distance between vertices i and j (1-indexed, i < j)."""
    if not (1 <= i < j <= config.n):
        raise IndexError(f"need 1 <= i < j <= n, got i={i}, j={j}")
    ri, rj = config.r[i - 1], config.r[j - 1]
    return float(ri * ri + rj * rj
                 - 2.0 * ri * rj * math.cos(config.theta[i - 1] - config.theta[j - 1]))


def initial_point(spec: ModelSpec) -> PolygonConfig:
    """Uniform-fan start: theta_i = i pi / n, all free radii 1."""
    n = spec.n
    th = np.arange(1, n + 1) * (math.pi / n)
    r = np.ones(n)
    r[-1] = 0.0
    return PolygonConfig(n=n, r=r, theta=th)


@dataclass
class NlpProblem:
    """Bound-constrained NLP with inequality constraints g(x) <= 0.

    The variable vector x lists the free radii then the free angles; with
    the symmetry reduction active, only the non-mirrored half of each.
    Fixed values (equal lower/upper bounds) stay in the vector so the
    reported counts match the model tables.
    """

    spec: ModelSpec
    num_vars: int
    num_constraints: int
    lower: np.ndarray
    upper: np.ndarray
    initial_point: PolygonConfig

    # affine map from x to the full free vector u = offset + sign * x[zidx]
    _zidx: np.ndarray = field(repr=False, default=None)
    _sign: np.ndarray = field(repr=False, default=None)
    _offset: np.ndarray = field(repr=False, default=None)
    _rep: np.ndarray = field(repr=False, default=None)

    # constraint structure
    _pi: np.ndarray = field(repr=False, default=None)   # distance pair lhs
    _pj: np.ndarray = field(repr=False, default=None)   # distance pair rhs
    _gap_lb: float = 0.0

    # precomputed jacobian triplet pattern (rows, cols, signs, kinds)
    _jrows: np.ndarray = field(repr=False, default=None)
    _jcols: np.ndarray = field(repr=False, default=None)
    _jsign: np.ndarray = field(repr=False, default=None)

    # ---- coordinate maps -------------------------------------------------

    def _expand(self, x: np.ndarray) -> np.ndarray:
        """Full free vector (r_1..r_{n-1}, theta_1..theta_{n-1}) from x."""
        return self._offset + self._sign * np.asarray(x, dtype=float)[self._zidx]

    def decode(self, x: np.ndarray) -> PolygonConfig:
        n = self.spec.n
        u = self._expand(x)
        r = np.append(u[: n - 1], 0.0)
        th = np.append(u[n - 1 :], math.pi)
        return PolygonConfig(n=n, r=r, theta=th)

    def encode(self, config: PolygonConfig) -> np.ndarray:
        n = self.spec.n
        if config.n != n:
            raise ValueError(f"config has n={config.n}, problem has n={n}")
        u = np.concatenate((config.r[: n - 1], config.theta[: n - 1]))
        return u[self._rep]

    # ---- evaluation ------------------------------------------------------

    def objective(self, x: np.ndarray) -> float:
        """Polygon area (to be maximized)."""
        return area(self.decode(x))

    def gradient(self, x: np.ndarray) -> np.ndarray:
        gu = area_gradient(self.decode(x))
        return np.bincount(self._zidx, weights=self._sign * gu,
                           minlength=self.num_vars)

    def constraints(self, x: np.ndarray) -> np.ndarray:
        """All constraint values in canonical g(x) <= 0 form."""
        n = self.spec.n
        u = self._expand(x)
        r = u[: n - 1]
        th = u[n - 1 :]
        ri, rj = r[self._pi], r[self._pj]
        dth = th[self._pi] - th[self._pj]
        dist = ri * ri + rj * rj - 2.0 * ri * rj * np.cos(dth) - 1.0
        gaps = self._gap_lb - th[1 : n - 1] + th[: n - 2]
        return np.concatenate((dist, gaps))

    def jacobian(self, x: np.ndarray):
        """Sparse constraint Jacobian as (rows, cols, values) triplets.

        The sparsity pattern (rows, cols) is identical for every x.
        """
        n = self.spec.n
        u = self._expand(x)
        r = u[: n - 1]
        th = u[n - 1 :]
        ri, rj = r[self._pi], r[self._pj]
        dth = th[self._pi] - th[self._pj]
        cosd, sind = np.cos(dth), np.sin(dth)
        # per distance row: d/dr_i, d/dr_j, d/dth_i, d/dth_j
        dvals = np.column_stack(
            (
                2.0 * ri - 2.0 * rj * cosd,
                2.0 * rj - 2.0 * ri * cosd,
                2.0 * ri * rj * sind,
                -2.0 * ri * rj * sind,
            )
        ).ravel()
        gvals = np.tile([1.0, -1.0], n - 2)
        vals = np.concatenate((dvals, gvals)) * self._jsign
        return self._jrows, self._jcols, vals

    def objective_hessp(self, x: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Area Hessian times direction v (both in problem coordinates)."""
        n = self.spec.n
        u = self._expand(x)
        vu = self._sign * np.asarray(v, dtype=float)[self._zidx]
        r = np.append(u[: n - 1], 0.0)
        th = np.append(u[n - 1 :], math.pi)
        vr = np.append(vu[: n - 1], 0.0)
        vt = np.append(vu[n - 1 :], 0.0)

        a, b = r[:-1], r[1:]
        va, vb = vr[:-1], vr[1:]
        dth = np.diff(th)
        dvt = vt[1:] - vt[:-1]
        s, c = np.sin(dth), np.cos(dth)

        hr = np.zeros(n)
        ht = np.zeros(n)
        idx = np.arange(n - 1)
        np.add.at(hr, idx, 0.5 * (vb * s + b * c * dvt))
        np.add.at(hr, idx + 1, 0.5 * (va * s + a * c * dvt))
        cross = 0.5 * c * (va * b + a * vb)
        curve = 0.5 * a * b * s * dvt
        np.add.at(ht, idx, -cross + curve)
        np.add.at(ht, idx + 1, cross - curve)

        hu = np.concatenate((hr[:-1], ht[:-1]))
        return np.bincount(self._zidx, weights=self._sign * hu,
                           minlength=self.num_vars)

    def constraints_weighted_hessp(
        self, x: np.ndarray, v: np.ndarray, weights: np.ndarray
    ) -> np.ndarray:
        """(sum_k weights_k * Hess g_k) times v.

        Only the distance rows are nonlinear; angle-gap rows drop out.
        """
        n = self.spec.n
        u = self._expand(x)
        vu = self._sign * np.asarray(v, dtype=float)[self._zidx]
        r = u[: n - 1]
        vr = vu[: n - 1]
        vt = vu[n - 1 :]
        th = u[n - 1 :]

        pi_, pj_ = self._pi, self._pj
        w = np.asarray(weights, dtype=float)[: len(pi_)]
        ri, rj = r[pi_], r[pj_]
        vri, vrj = vr[pi_], vr[pj_]
        dvt = vt[pi_] - vt[pj_]
        d = th[pi_] - th[pj_]
        s, c = np.sin(d), np.cos(d)

        hri = w * (2.0 * vri - 2.0 * c * vrj + 2.0 * rj * s * dvt)
        hrj = w * (2.0 * vrj - 2.0 * c * vri + 2.0 * ri * s * dvt)
        hth = w * (2.0 * s * (vri * rj + ri * vrj) + 2.0 * ri * rj * c * dvt)

        nf = n - 1
        hu = np.zeros(2 * nf)
        np.add.at(hu, pi_, hri)
        np.add.at(hu, pj_, hrj)
        np.add.at(hu, nf + pi_, hth)
        np.add.at(hu, nf + pj_, -hth)
        return np.bincount(self._zidx, weights=self._sign * hu,
                           minlength=self.num_vars)

    def jacobian_dense(self, x: np.ndarray) -> np.ndarray:
        rows, cols, vals = self.jacobian(x)
        out = np.zeros((self.num_constraints, self.num_vars))
        np.add.at(out, (rows, cols), vals)
        return out


def build_problem(spec: ModelSpec) -> NlpProblem:
    """Assemble the NLP for one model instance.

    Constraint layout: all (n-1)(n-2)/2 pairwise-distance rows first, then
    the n-2 angle-gap rows.  Angle equalities of the tightened variant are
    realized as equal variable bounds, not extra constraint rows.
    """
    n = spec.n
    nf = n - 1
    tightened = spec.variant is Variant.TIGHTENED

    # full free-variable bounds: radii in [0,1], angles in [0,pi]
    lo_u = np.concatenate((np.zeros(nf), np.zeros(nf)))
    hi_u = np.concatenate((np.ones(nf), np.full(nf, math.pi)))
    if tightened:
        if n % 2 == 0:
            k = n // 2 - 1          # theta_{n/2}
            lo_u[nf + k] = hi_u[nf + k] = math.pi / 2
        else:
            fixed = np.arange(1, n) * (math.pi / n)
            lo_u[nf:] = hi_u[nf:] = fixed

    # affine variable map (identity unless the symmetry reduction is on)
    if spec.symmetry:
        m = n // 2
        zidx = np.empty(2 * nf, dtype=int)
        sign = np.ones(2 * nf)
        offset = np.zeros(2 * nf)
        for k in range(1, n):       # vertex index, 1-based
            rep = k if k <= m else n - k
            zidx[k - 1] = rep - 1
            zidx[nf + k - 1] = m + rep - 1
            if k > m:
                sign[nf + k - 1] = -1.0
                offset[nf + k - 1] = math.pi
        num_vars = 2 * m
    else:
        num_vars = 2 * nf
        zidx = np.arange(2 * nf)
        sign = np.ones(2 * nf)
        offset = np.zeros(2 * nf)

    # representative full index for each variable (sign +1, offset 0)
    rep = np.zeros(num_vars, dtype=int)
    for f in range(2 * nf):
        if sign[f] == 1.0 and offset[f] == 0.0:
            rep[zidx[f]] = f

    lower = np.full(num_vars, -np.inf)
    upper = np.full(num_vars, np.inf)
    # mirrored entries share bounds with their representatives, so taking
    # the representative's bounds is exact
    lower[:] = lo_u[rep]
    upper[:] = hi_u[rep]

    pi_idx, pj_idx = np.triu_indices(nf, k=1)
    num_dist = len(pi_idx)
    num_gaps = n - 2
    num_constraints = num_dist + num_gaps

    # jacobian triplet pattern
    jrows = np.concatenate(
        (
            np.repeat(np.arange(num_dist), 4),
            np.repeat(num_dist + np.arange(num_gaps), 2),
        )
    )
    dcols_u = np.column_stack(
        (pi_idx, pj_idx, nf + pi_idx, nf + pj_idx)
    ).ravel()
    gcols_u = np.column_stack(
        (nf + np.arange(num_gaps), nf + 1 + np.arange(num_gaps))
    ).ravel()
    cols_u = np.concatenate((dcols_u, gcols_u))
    jcols = zidx[cols_u]
    jsign = sign[cols_u]

    problem = NlpProblem(
        spec=spec,
        num_vars=num_vars,
        num_constraints=num_constraints,
        lower=lower,
        upper=upper,
        initial_point=initial_point(spec),
        _zidx=zidx,
        _sign=sign,
        _offset=offset,
        _rep=rep,
        _pi=pi_idx,
        _pj=pj_idx,
        _gap_lb=(math.pi / n) if tightened else 0.0,
        _jrows=jrows,
        _jcols=jcols,
        _jsign=jsign,
    )
    return problem


def max_violation(problem: NlpProblem, config: PolygonConfig) -> float:
    """Largest positive constraint value plus any bound violation."""
    x = problem.encode(config)
    g = problem.constraints(x)
    worst = max(0.0, float(g.max())) if len(g) else 0.0
    bound = max(
        float(np.max(problem.lower - x, initial=0.0)),
        float(np.max(x - problem.upper, initial=0.0)),
    )
    return max(worst, bound)
