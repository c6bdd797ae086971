"""End-to-end acceptance checks.

Each test prints one PASS/FAIL line in the terminal summary via
conftest.record_criterion, then asserts.  Solves are shared through the
session-scoped cache, so the expensive sweeps run once.
"""

import math

import numpy as np
import pytest

from conftest import record_criterion
from lsp_lab.experiments import StartKind, SweepRecord, estimate_slope
from lsp_lab.model import ModelSpec, Variant, build_problem
from lsp_lab.oracle import fd_check, regular_polygon_area
from lsp_lab.regression import fit, predict
from lsp_lab.render import RenderOptions, cartesian_vertices, render_svg

QUARTER_PI = math.pi / 4

EVEN_TABLE = {
    4: 0.500000, 6: 0.674981, 8: 0.726868, 10: 0.749137, 12: 0.760730,
    14: 0.767531, 16: 0.771861, 18: 0.774788, 20: 0.776859, 24: 0.779524,
    28: 0.781111, 32: 0.782133, 36: 0.782828, 40: 0.783323,
}

ALL_EVENS = list(range(4, 81, 2))
ALL_ODDS = list(range(3, 100, 2))


def as_record(n, report, variant=Variant.TIGHTENED):
    return SweepRecord(
        n=n, variables=2 * (n - 1),
        constraints=(n - 1) * (n - 2) // 2 + (n - 2),
        runtime_seconds=report.runtime_seconds, objective=report.objective,
        max_violation=report.max_violation, variant=variant,
        start=StartKind(), converged=report.converged,
    )


def test_criterion_1_even_table(solved):
    worst = 0.0
    worst_viol = 0.0
    ok = True
    for n, ref in EVEN_TABLE.items():
        rep = solved(n)
        dev = abs(rep.objective - ref)
        worst = max(worst, dev)
        worst_viol = max(worst_viol, rep.max_violation)
        ok = ok and dev <= 1e-5 and rep.max_violation <= 1e-7
    record_criterion(
        1, ok,
        f"even table n=4..40: max |dev|={worst:.2e}, max viol={worst_viol:.1e}",
    )
    assert ok


def test_criterion_2_odd_oracle(solved):
    worst = 0.0
    ok = True
    for n in range(3, 40, 2):
        rep = solved(n)
        dev = abs(rep.objective - regular_polygon_area(n))
        worst = max(worst, dev)
        ok = ok and dev <= 1e-7
    record_criterion(2, ok, f"odd n=3..39 vs analytic areas: max |dev|={worst:.2e}")
    assert ok


def test_criterion_3_n100(solved):
    rep = solved(100)
    dev = abs(rep.objective - 0.785072)
    ok = dev <= 1e-5 and rep.converged
    record_criterion(
        3, ok,
        f"n=100: objective={rep.objective:.7f} (|dev|={dev:.2e}), "
        f"{rep.runtime_seconds:.0f}s",
    )
    assert ok


def test_criterion_4_slopes(solved):
    even_recs = [as_record(n, solved(n)) for n in ALL_EVENS + [100]]
    odd_recs = [as_record(n, solved(n)) for n in ALL_ODDS]
    even = estimate_slope(even_recs, "even")
    odd = estimate_slope(odd_recs, "odd")
    ok_even = abs(even.slope - (-2.04618)) <= 0.08
    ok_odd = abs(odd.slope - (-1.99848)) <= 0.05
    record_criterion(
        4, ok_even and ok_odd,
        f"slopes: even {even.slope:.5f} (target -2.04618±0.08), "
        f"odd {odd.slope:.5f} (target -1.99848±0.05)",
    )
    assert ok_even and ok_odd


def test_criterion_5_derivatives():
    worst = 0.0
    for n in (6, 13, 20):
        problem = build_problem(ModelSpec(n=n, variant=Variant.STANDARD))
        rng = np.random.default_rng(1000 + n)
        for _ in range(10):
            th = np.sort(rng.uniform(0.05, math.pi - 0.05, n - 1))
            r = rng.uniform(0.1, 1.0, n - 1)
            x = np.concatenate((r, th))
            worst = max(worst, fd_check(problem.objective, problem.gradient, x))
            dense = problem.jacobian_dense(x)
            for k in range(problem.num_constraints):
                err = fd_check(
                    lambda z, k=k: problem.constraints(z)[k],
                    lambda z, k=k: dense[k],
                    x,
                )
                worst = max(worst, err)
    ok = worst <= 1e-6
    record_criterion(5, ok, f"gradient/Jacobian vs central FD: max rel err={worst:.2e}")
    assert ok


def test_criterion_6_counts():
    tabulated = (
        list(EVEN_TABLE) + [44, 48, 52, 56, 60, 70, 80, 90, 100]
        + list(range(3, 40, 2))
    )
    ok = True
    for n in tabulated:
        for variant in Variant:
            p = build_problem(ModelSpec(n=n, variant=variant))
            ok = ok and p.num_vars == 2 * (n - 1)
            ok = ok and p.num_constraints == (n - 1) * (n - 2) // 2 + (n - 2)
    p100 = build_problem(ModelSpec(n=100, variant=Variant.STANDARD))
    ok = ok and (p100.num_vars, p100.num_constraints) == (198, 4949)
    record_criterion(6, ok, f"variable/constraint counts for {len(tabulated)} table sizes")
    assert ok


def test_criterion_7_regression(solved):
    reference = (-0.023182, -2.630729, -7.360373)
    synth = [
        SweepRecord(
            n=n, variables=2 * (n - 1),
            constraints=(n - 1) * (n - 2) // 2 + (n - 2),
            runtime_seconds=0.0,
            objective=QUARTER_PI + reference[0] / n + reference[1] / n**2
            + reference[2] / n**3,
            max_violation=0.0, variant=Variant.TIGHTENED,
            start=StartKind(), converged=True,
        )
        for n in range(4, 101, 2)
    ]
    round_trip = fit(synth, "even")
    rt_err = max(
        abs(a - b) for a, b in zip(round_trip.coefficients, reference)
    )

    # own sweep: n=4 sits far off the asymptotic regime and is excluded
    own = [as_record(n, solved(n)) for n in ALL_EVENS + [100] if n >= 6]
    own_fit = fit(own, "even")
    max_p = max(own_fit.coefficient_p_values)
    resid = max(
        abs(predict(own_fit, rec.n) - rec.objective) for rec in own
    )
    ok = rt_err <= 1e-9 and max_p < 1e-4 and resid <= 2e-4
    record_criterion(
        7, ok,
        f"regression: round-trip err={rt_err:.1e}, max p={max_p:.1e}, "
        f"max residual={resid:.1e}",
    )
    assert ok


def test_criterion_8_tightened_dominance(solved):
    worst_gap = -np.inf
    worst_n = None
    ok = True
    for n in range(6, 81, 2):
        tight = solved(n, Variant.TIGHTENED)
        std = solved(n, Variant.STANDARD)
        gap = std.objective - tight.objective
        if gap > worst_gap:
            worst_gap, worst_n = gap, n
        ok = ok and tight.objective >= std.objective - 1e-9
    record_criterion(
        8, ok,
        f"tightened >= standard for even 6..80: worst margin "
        f"{-worst_gap:.2e} at n={worst_n}",
    )
    assert ok


def test_criterion_9_isodiametric(solved):
    reports = list(solved.cache.values())
    assert reports, "no cached solves"
    below = all(
        rep.objective < QUARTER_PI for rep in reports if rep.converged
    )
    table_objectives = [solved(n).objective for n in sorted(EVEN_TABLE)]
    increasing = all(
        b > a for a, b in zip(table_objectives, table_objectives[1:])
    )
    ok = below and increasing
    record_criterion(
        9, ok,
        f"{sum(r.converged for r in reports)} converged solves < pi/4: "
        f"{below}; even table objectives strictly increasing: {increasing}",
    )
    assert ok


def test_criterion_10_rendering(solved):
    ok = True
    details = []
    for n in (3, 4, 6, 18):
        rep = solved(n)
        svg = render_svg(rep.config, RenderOptions(), objective=rep.objective)
        verts = cartesian_vertices(rep.config)
        red = 0
        for i in range(n):
            for j in range(i + 1, n):
                d = math.dist(verts[i], verts[j])
                if abs(d - 1.0) <= 1e-6:
                    red += 1
                    ok = ok and abs(d - 1.0) <= 1e-6
        assert svg.count('stroke="#d62728"') == red
        details.append(f"n={n}:{red} red")
        if n == 4:
            ok = ok and red == 2
    record_criterion(10, ok, "unit diagonals rendered red (" + ", ".join(details) + ")")
    assert ok
