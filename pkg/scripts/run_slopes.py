#!/usr/bin/env python3
"""Estimate the loglog convergence slopes of pi/4 - A(n) and fit the
asymptotic 1/n-series, separately per parity.

Usage: python scripts/run_slopes.py [outdir]
"""

import sys
from pathlib import Path

from lsp_lab.experiments import StartKind, estimate_slope, run_sweep
from lsp_lab.model import Variant
from lsp_lab.regression import fit
from lsp_lab.storage import fit_json, write_sweep_csv, write_text_atomic


def main() -> int:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    outdir.mkdir(parents=True, exist_ok=True)
    selections = {
        "even": list(range(4, 81, 2)) + [100],
        "odd": list(range(5, 100, 2)),
    }
    for parity, ns in selections.items():
        records = run_sweep(ns, Variant.TIGHTENED, StartKind())
        write_sweep_csv(outdir / f"sweep_{parity}.csv", records)
        slope = estimate_slope(records, parity)
        print(
            f"{parity}: slope {slope.slope:.5f} over n in "
            f"[{slope.n_min}, {slope.n_max}], rmse {slope.rmse:.2e}"
        )
        model = fit([r for r in records if r.n >= 6], parity)
        write_text_atomic(outdir / f"fit_{parity}.json", fit_json(model))
        print(
            f"{parity}: A(n) ~ pi/4 + {model.c1:+.6f}/n "
            f"{model.c2:+.6f}/n^2 {model.c3:+.6f}/n^3"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
