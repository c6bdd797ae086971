#!/usr/bin/env python3
"""Reproduce the even/odd area tables and write them as CSV.

Usage: python scripts/run_tables.py [outdir]
"""

import sys
from pathlib import Path

from lsp_lab.experiments import StartKind, run_sweep
from lsp_lab.model import Variant
from lsp_lab.storage import write_sweep_csv

EVEN_NS = (
    list(range(4, 21, 2)) + list(range(24, 41, 4))
    + list(range(44, 61, 4)) + [70, 80, 90, 100]
)
ODD_NS = list(range(3, 40, 2))


def main() -> int:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("results")
    outdir.mkdir(parents=True, exist_ok=True)
    for name, ns in (("even", EVEN_NS), ("odd", ODD_NS)):
        records = run_sweep(ns, Variant.TIGHTENED, StartKind())
        path = outdir / f"table_{name}.csv"
        write_sweep_csv(path, records)
        print(f"wrote {path} ({len(records)} rows)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
