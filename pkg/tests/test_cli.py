import json
import math

import numpy as np
import pytest

from lsp_lab.cli import main
from lsp_lab.experiments import StartKind, SweepRecord
from lsp_lab.model import PolygonConfig, Variant
from lsp_lab.render import RenderOptions, cartesian_vertices, render_svg
from lsp_lab.storage import CSV_HEADER, read_sweep_csv, write_sweep_csv


def red_segment_lengths(svg_text, config):
    """True lengths of the segments the SVG styles red, recomputed from
    the polygon coordinates rather than the pixel positions."""
    verts = cartesian_vertices(config)
    n = config.n
    lengths = []
    for i in range(n):
        for j in range(i + 1, n):
            d = math.dist(verts[i], verts[j])
            if abs(d - 1.0) <= 1e-6:
                lengths.append(d)
    return lengths


# ---- solve command ------------------------------------------------------


def test_solve_n6_json(tmp_path):
    out = tmp_path / "hex.json"
    code = main(["solve", "--n", "6", "--model", "tightened",
                 "--json", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert float(payload["objective"]) == pytest.approx(0.674981, abs=1e-5)
    assert payload["n"] == 6
    assert len(payload["vertices"]) == 6
    v_last = payload["vertices"][-1]
    assert v_last["r"] == 0.0 and v_last["theta"] == pytest.approx(math.pi, abs=1e-9)


def test_solve_rejects_n2(tmp_path):
    out = tmp_path / "no.json"
    code = main(["solve", "--n", "2", "--json", str(out)])
    assert code == 1
    assert not out.exists()


def test_solve_rejects_large_without_flag():
    assert main(["solve", "--n", "1000"]) == 1


def test_usage_error_exit_code():
    assert main(["solve"]) == 1
    assert main(["frobnicate"]) == 1


# ---- sweep and fit ------------------------------------------------------


@pytest.fixture(scope="module")
def sweep_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("sweep") / "even.csv"
    code = main(["sweep", "--even", "4..20", "--model", "tightened",
                 "--csv", str(path)])
    assert code == 0
    return path


def test_sweep_csv_shape(sweep_csv):
    lines = sweep_csv.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert len(lines) == 1 + 9
    objectives = [float(line.split(",")[4]) for line in lines[1:]]
    assert objectives == sorted(objectives)
    assert all(b > a for a, b in zip(objectives, objectives[1:]))


def test_sweep_csv_round_trip(sweep_csv):
    records = read_sweep_csv(sweep_csv)
    assert [r.n for r in records] == list(range(4, 21, 2))
    assert all(isinstance(r.variant, Variant) for r in records)
    # rewriting reproduces the file byte for byte
    copy = sweep_csv.parent / "copy.csv"
    write_sweep_csv(copy, records)
    assert copy.read_text() == sweep_csv.read_text()


def test_fit_from_sweep(sweep_csv, tmp_path):
    out = tmp_path / "fit.json"
    code = main(["fit", "--csv", str(sweep_csv), "--parity", "even",
                 "--json", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert set(payload["coefficients"]) == {"c1", "c2", "c3"}
    assert payload["n_range"] == [4, 20]
    assert len(payload["p_values"]) == 3


def test_fit_rejects_mixed_parity(tmp_path):
    bad = tmp_path / "mixed.csv"
    recs = [
        SweepRecord(n=n, variables=2 * (n - 1),
                    constraints=(n - 1) * (n - 2) // 2 + (n - 2),
                    runtime_seconds=0.0, objective=0.7, max_violation=0.0,
                    variant=Variant.TIGHTENED, start=StartKind(),
                    converged=True)
        for n in (4, 6, 7, 8, 10)
    ]
    write_sweep_csv(bad, recs)
    assert main(["fit", "--csv", str(bad), "--parity", "even"]) == 1


def test_fit_missing_file():
    assert main(["fit", "--csv", "/nonexistent/x.csv", "--parity", "even"]) == 1


# ---- rendering ----------------------------------------------------------


def regular_triangle():
    th = np.array([math.pi / 3, 2 * math.pi / 3, math.pi])
    r = np.array([1.0, 1.0, 0.0])
    return PolygonConfig(n=3, r=r, theta=th)


def test_render_triangle_all_red():
    cfg = regular_triangle()
    svg = render_svg(cfg, RenderOptions())
    assert svg.count('stroke="#d62728"') == 3
    assert svg.count("<line") == 3


def test_render_zero_config_no_red():
    cfg = PolygonConfig(n=5, r=np.zeros(5),
                        theta=np.linspace(math.pi / 5, math.pi, 5))
    svg = render_svg(cfg)
    assert svg.count("<line") == 10
    assert 'stroke="#d62728"' not in svg


def test_render_metadata_preserves_objective_text():
    cfg = regular_triangle()
    svg = render_svg(cfg, objective=0.4330127019)
    assert "objective=0.4330127019" in svg
    assert "n=3" in svg


def test_render_red_after_black():
    cfg = regular_triangle()
    cfg2 = PolygonConfig(
        n=4,
        r=np.array([0.7, 1.0, 0.7, 0.0]),
        theta=np.array([math.pi / 4, math.pi / 2, 3 * math.pi / 4, math.pi]),
    )
    svg = render_svg(cfg2)
    lines = [ln for ln in svg.splitlines() if "<line" in ln]
    reds = [i for i, ln in enumerate(lines) if "#d62728" in ln]
    blacks = [i for i, ln in enumerate(lines) if "#000000" in ln]
    if reds and blacks:
        assert min(reds) > max(blacks)


def test_solve_svg_output(tmp_path):
    svg_path = tmp_path / "square.svg"
    code = main(["solve", "--n", "4", "--svg", str(svg_path),
                 "--json", str(tmp_path / "square.json")])
    assert code == 0
    text = svg_path.read_text()
    assert text.startswith("<?xml")
    assert text.count("<line") == 6


# ---- workers env --------------------------------------------------------


def test_workers_env_override(monkeypatch):
    from lsp_lab.cli import _default_workers

    monkeypatch.setenv("LSP_LAB_WORKERS", "3")
    assert _default_workers() == 3
    monkeypatch.setenv("LSP_LAB_WORKERS", "junk")
    assert _default_workers() == 1
    monkeypatch.delenv("LSP_LAB_WORKERS")
    assert _default_workers() == 1
