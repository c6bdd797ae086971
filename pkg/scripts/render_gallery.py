#!/usr/bin/env python3
"""Solve a few instances and render them as SVG (unit diagonals in red).

Usage: python scripts/render_gallery.py [outdir] [n ...]
"""

import sys
from pathlib import Path

from lsp_lab.model import ModelSpec, Variant, build_problem
from lsp_lab.render import RenderOptions, render_svg
from lsp_lab.solver import solve
from lsp_lab.storage import write_text_atomic


def main() -> int:
    args = sys.argv[1:]
    outdir = Path(args[0]) if args else Path("results")
    ns = [int(a) for a in args[1:]] or [3, 4, 5, 6, 18]
    outdir.mkdir(parents=True, exist_ok=True)
    for n in ns:
        problem = build_problem(ModelSpec(n=n, variant=Variant.TIGHTENED))
        report = solve(problem)
        svg = render_svg(report.config, RenderOptions(), objective=report.objective)
        path = outdir / f"polygon_{n:03d}.svg"
        write_text_atomic(path, svg)
        print(
            f"n={n}: area {report.objective:.10f}, "
            f"violation {report.max_violation:.1e} -> {path}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
