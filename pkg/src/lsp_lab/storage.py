"""CSV/JSON persistence with atomic writes.

All floating-point values are serialized with 10 digits after the
decimal point; files are written to a temporary path and renamed into
place so readers never see partial output.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from pathlib import Path

from .experiments import StartKind, SweepRecord
from .model import PolygonConfig, Variant
from .regression import RegressionFit

__all__ = [
    "CSV_HEADER",
    "write_text_atomic",
    "write_sweep_csv",
    "read_sweep_csv",
    "solve_result_json",
    "fit_json",
]

CSV_HEADER = (
    "n,variables,constraints,runtime_seconds,objective,"
    "max_violation,variant,start,converged"
)


def _fmt(x: float) -> str:
    return f"{x:.10f}"


def write_text_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(
        dir=path.parent or Path("."), prefix=path.name, suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_sweep_csv(path: str | Path, records: list[SweepRecord]) -> None:
    lines = [CSV_HEADER]
    for rec in records:
        lines.append(
            ",".join(
                [
                    str(rec.n),
                    str(rec.variables),
                    str(rec.constraints),
                    _fmt(rec.runtime_seconds),
                    _fmt(rec.objective),
                    f"{rec.max_violation:.10e}",
                    rec.variant.value,
                    rec.start.label(),
                    str(rec.converged).lower(),
                ]
            )
        )
    write_text_atomic(path, "\n".join(lines) + "\n")


def read_sweep_csv(path: str | Path) -> list[SweepRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER.split(","):
            raise ValueError(f"unexpected CSV header in {path}")
        records = []
        for row in reader:
            records.append(
                SweepRecord(
                    n=int(row["n"]),
                    variables=int(row["variables"]),
                    constraints=int(row["constraints"]),
                    runtime_seconds=float(row["runtime_seconds"]),
                    objective=float(row["objective"]),
                    max_violation=float(row["max_violation"]),
                    variant=Variant(row["variant"]),
                    start=StartKind.parse(row["start"]),
                    converged=row["converged"] == "true",
                )
            )
    return records


def solve_result_json(
    n: int,
    variant: Variant,
    objective: float,
    max_violation: float,
    runtime_seconds: float,
    converged: bool,
    config: PolygonConfig,
) -> str:
    vertices = [
        {
            "r": float(_fmt(r)),
            "theta": float(_fmt(t)),
            "x": float(_fmt(r * math.cos(t))),
            "y": float(_fmt(r * math.sin(t))),
        }
        for r, t in zip(config.r, config.theta)
    ]
    payload = {
        "n": n,
        "variant": variant.value,
        "objective": _fmt(objective),
        "max_violation": f"{max_violation:.10e}",
        "runtime_seconds": float(_fmt(runtime_seconds)),
        "converged": converged,
        "vertices": vertices,
    }
    return json.dumps(payload, indent=2) + "\n"


def fit_json(fit: RegressionFit) -> str:
    payload = {
        "parity": fit.parity,
        "intercept": float(f"{math.pi / 4:.10f}"),
        "coefficients": {
            "c1": float(f"{fit.c1:.10g}"),
            "c2": float(f"{fit.c2:.10g}"),
            "c3": float(f"{fit.c3:.10g}"),
        },
        "p_values": [float(f"{p:.10g}") for p in fit.coefficient_p_values],
        "n_range": [fit.n_min, fit.n_max],
        "r_squared": float(_fmt(fit.r_squared)),
        "residual_max": float(f"{fit.residual_max:.10g}"),
    }
    return json.dumps(payload, indent=2) + "\n"
