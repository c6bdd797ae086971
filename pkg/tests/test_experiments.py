import math

import numpy as np
import pytest

from lsp_lab.experiments import (
    DESK_SCALE_CAP,
    SlopeEstimate,
    StartKind,
    SweepRecord,
    compare_variants,
    estimate_slope,
    random_start,
    random_start_study,
    run_sweep,
)
from lsp_lab.model import Variant


def synthetic_records(ns, gaps):
    return [
        SweepRecord(
            n=n, variables=2 * (n - 1),
            constraints=(n - 1) * (n - 2) // 2 + (n - 2),
            runtime_seconds=0.0, objective=math.pi / 4 - gap,
            max_violation=0.0, variant=Variant.TIGHTENED,
            start=StartKind(), converged=True,
        )
        for n, gap in zip(ns, gaps)
    ]


# ---- start kinds --------------------------------------------------------


def test_start_kind_labels_round_trip():
    for s in (StartKind(), StartKind("random", 42)):
        assert StartKind.parse(s.label()) == s
    with pytest.raises(ValueError):
        StartKind("random")
    with pytest.raises(ValueError):
        StartKind.parse("bogus")


def test_random_start_distribution():
    cfg = random_start(10, seed=5)
    assert cfg.r[-1] == 0.0 and cfg.theta[-1] == math.pi
    free_th = cfg.theta[:-1]
    assert np.all(np.diff(free_th) >= 0)
    assert np.all((free_th > 0) & (free_th < math.pi))
    assert np.all((cfg.r[:-1] >= 0.5) & (cfg.r[:-1] <= 1.0))


# ---- sweeps -------------------------------------------------------------


def test_run_sweep_small_even_table():
    records = run_sweep([4, 6, 8, 10], Variant.TIGHTENED)
    objectives = [r.objective for r in records]
    expected = [0.500000, 0.674981, 0.726868, 0.749137]
    assert objectives == pytest.approx(expected, abs=1e-5)
    for rec in records:
        assert rec.variables == 2 * (rec.n - 1)
        assert rec.constraints == (rec.n - 1) * (rec.n - 2) // 2 + (rec.n - 2)
        assert rec.converged


def test_run_sweep_rejects_bad_n():
    with pytest.raises(ValueError):
        run_sweep([2], Variant.STANDARD)
    with pytest.raises(ValueError):
        run_sweep([DESK_SCALE_CAP + 2], Variant.STANDARD)


# ---- slope estimation ---------------------------------------------------


def test_slope_exact_inverse_square_law():
    ns = [10, 20, 40, 80, 160, 320]
    est = estimate_slope(synthetic_records(ns, [1.0 / n**2 for n in ns]), "even")
    assert est.slope == pytest.approx(-2.0, abs=1e-9)
    assert est.rmse <= 1e-12
    assert (est.n_min, est.n_max) == (10, 320)


def test_slope_requires_five_points_one_parity():
    recs = synthetic_records([4, 6, 8, 10], [0.1] * 4)
    with pytest.raises(ValueError):
        estimate_slope(recs, "even")
    with pytest.raises(ValueError):
        estimate_slope(recs, "both")


def test_slope_rejects_nonpositive_gap():
    recs = synthetic_records([4, 6, 8, 10, 12], [0.1, 0.1, 0.1, 0.1, -0.01])
    with pytest.raises(ValueError):
        estimate_slope(recs, "even")


def test_slope_filters_parity():
    ns = [5, 10, 20, 40, 80, 160, 11]
    gaps = [1.0 / n**2 for n in ns]
    est = estimate_slope(synthetic_records(ns, gaps), "even")
    assert est.n_min == 10 and est.n_max == 160


# ---- comparisons and random starts -------------------------------------


def test_compare_variants_n4_both_half():
    rows = compare_variants([4])
    assert rows[0].tightened_objective == pytest.approx(0.5, abs=1e-5)
    assert rows[0].standard_objective == pytest.approx(0.5, abs=1e-5)
    assert rows[0].tightened_gap == pytest.approx(math.pi / 4 - 0.5, abs=1e-5)


def test_random_start_study_n6():
    records = random_start_study(6, count=6, seed=123)
    assert len(records) == 6
    best = max(r.objective for r in records)
    assert best >= 0.67
    spread = best - min(r.objective for r in records)
    assert spread >= 0.0
    for rec in records:
        assert rec.variant is Variant.STANDARD
        assert rec.start.kind == "random"


def test_random_start_study_deterministic():
    a = random_start_study(6, count=1, seed=9)
    b = random_start_study(6, count=1, seed=9)
    assert a[0].objective == b[0].objective


def test_random_start_study_validation():
    with pytest.raises(ValueError):
        random_start_study(6, count=0, seed=1)
