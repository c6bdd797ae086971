"""Experiment drivers: n-sweeps, slope estimation, variant comparison,
random-start studies."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .model import ModelSpec, PolygonConfig, Variant, build_problem
from .solver import SolveReport, SolverOptions, solve

__all__ = [
    "DESK_SCALE_CAP",
    "StartKind",
    "SweepRecord",
    "SlopeEstimate",
    "run_sweep",
    "estimate_slope",
    "compare_variants",
    "random_start_study",
]

QUARTER_PI = math.pi / 4

# largest n run without an explicit opt-in; bigger instances take minutes
# to hours and are gated behind allow_large
DESK_SCALE_CAP = 100


@dataclass(frozen=True)
class StartKind:
    """Where a solve starts: the canonical uniform-fan point or a random one."""

    kind: str = "paper"          # "paper" | "random"
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in ("paper", "random"):
            raise ValueError(f"unknown start kind {self.kind!r}")
        if self.kind == "random" and self.seed is None:
            raise ValueError("random starts need a seed")

    def label(self) -> str:
        return "paper" if self.kind == "paper" else f"random:{self.seed}"

    @staticmethod
    def parse(label: str) -> "StartKind":
        if label == "paper":
            return StartKind()
        if label.startswith("random:"):
            return StartKind("random", int(label.split(":", 1)[1]))
        raise ValueError(f"unparseable start label {label!r}")


@dataclass(frozen=True)
class SweepRecord:
    n: int
    variables: int
    constraints: int
    runtime_seconds: float
    objective: float
    max_violation: float
    variant: Variant
    start: StartKind
    converged: bool


@dataclass(frozen=True)
class SlopeEstimate:
    parity: str
    n_min: int
    n_max: int
    slope: float
    intercept: float
    rmse: float


def random_start(n: int, seed: int) -> PolygonConfig:
    """Sorted uniform angles in (0, pi), radii uniform in (0.5, 1)."""
    rng = np.random.default_rng(seed)
    th = np.sort(rng.uniform(0.0, math.pi, n - 1))
    r = rng.uniform(0.5, 1.0, n - 1)
    return PolygonConfig(
        n=n, r=np.append(r, 0.0), theta=np.append(th, math.pi)
    )


def _check_cap(n: int, allow_large: bool):
    if n > DESK_SCALE_CAP and not allow_large:
        raise ValueError(
            f"n={n} exceeds the desk-scale cap {DESK_SCALE_CAP}; "
            "pass allow_large=True (solves at this size can take hours)"
        )
    if n > DESK_SCALE_CAP:
        warnings.warn(f"n={n} above desk scale; expect a long runtime")


def _record_from_report(
    n: int, variant: Variant, start: StartKind, report: SolveReport,
    variables: int, constraints: int
) -> SweepRecord:
    return SweepRecord(
        n=n,
        variables=variables,
        constraints=constraints,
        runtime_seconds=report.runtime_seconds,
        objective=report.objective,
        max_violation=report.max_violation,
        variant=variant,
        start=start,
        converged=report.converged,
    )


def solve_instance(
    n: int,
    variant: Variant,
    start: StartKind = StartKind(),
    opts: SolverOptions | None = None,
    symmetry: bool = False,
) -> SweepRecord:
    """Build, solve, and summarize a single model instance."""
    problem = build_problem(ModelSpec(n=n, variant=variant, symmetry=symmetry))
    if start.kind == "random":
        start_config = random_start(n, start.seed)
    else:
        start_config = problem.initial_point
    report = solve(problem, start_config, opts)
    return _record_from_report(
        n, variant, start, report, problem.num_vars, problem.num_constraints
    )


def _solve_args(args):
    return solve_instance(*args)


def run_sweep(
    ns: list[int],
    variant: Variant,
    start: StartKind = StartKind(),
    opts: SolverOptions | None = None,
    workers: int = 1,
    allow_large: bool = False,
) -> list[SweepRecord]:
    """One record per n, in input order; solve failures are flagged, not raised."""
    for n in ns:
        if n < 3:
            raise ValueError(f"need n >= 3, got {n}")
        _check_cap(n, allow_large)

    jobs = [(n, variant, start, opts) for n in ns]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_solve_args, jobs))
    else:
        records = [_solve_args(job) for job in jobs]
    return records


def estimate_slope(records: list[SweepRecord], parity: str) -> SlopeEstimate:
    """Least-squares slope of log(pi/4 - A(n)) against log(n)."""
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    want = 0 if parity == "even" else 1
    pts = sorted(
        {(rec.n, rec.objective) for rec in records if rec.n % 2 == want}
    )
    if len(pts) < 5:
        raise ValueError(f"need at least 5 {parity} records, got {len(pts)}")
    ns = np.array([p[0] for p in pts], dtype=float)
    gaps = QUARTER_PI - np.array([p[1] for p in pts])
    if np.any(gaps <= 0):
        raise ValueError("objective at or above pi/4 signals a solver fault")
    x = np.log(ns)
    y = np.log(gaps)
    slope, intercept = np.polyfit(x, y, 1)
    rmse = float(np.sqrt(np.mean((slope * x + intercept - y) ** 2)))
    return SlopeEstimate(
        parity=parity,
        n_min=int(ns[0]),
        n_max=int(ns[-1]),
        slope=float(slope),
        intercept=float(intercept),
        rmse=rmse,
    )


@dataclass(frozen=True)
class VariantComparison:
    n: int
    tightened_objective: float
    standard_objective: float
    tightened_gap: float
    standard_gap: float
    tightened_converged: bool
    standard_converged: bool


def compare_variants(
    ns: list[int],
    opts: SolverOptions | None = None,
    workers: int = 1,
    allow_large: bool = False,
) -> list[VariantComparison]:
    """Tightened vs standard model from the same uniform start, per n."""
    tight = run_sweep(ns, Variant.TIGHTENED, StartKind(), opts, workers, allow_large)
    std = run_sweep(ns, Variant.STANDARD, StartKind(), opts, workers, allow_large)
    out = []
    for t, s in zip(tight, std):
        out.append(
            VariantComparison(
                n=t.n,
                tightened_objective=t.objective,
                standard_objective=s.objective,
                tightened_gap=QUARTER_PI - t.objective,
                standard_gap=QUARTER_PI - s.objective,
                tightened_converged=t.converged,
                standard_converged=s.converged,
            )
        )
    return out


def random_start_study(
    n: int,
    count: int,
    seed: int,
    opts: SolverOptions | None = None,
    workers: int = 1,
    allow_large: bool = False,
) -> list[SweepRecord]:
    """Solve the standard model from `count` random starts."""
    if count < 1:
        raise ValueError("count must be at least 1")
    _check_cap(n, allow_large)
    seeds = np.random.SeedSequence(seed).generate_state(count)
    jobs = [
        (n, Variant.STANDARD, StartKind("random", int(s)), opts) for s in seeds
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_solve_args, jobs))
    return [_solve_args(job) for job in jobs]
