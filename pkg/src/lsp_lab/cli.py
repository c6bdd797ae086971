"""Command-line entry point: solve, sweep, fit, compare, random."""

from __future__ import annotations

import argparse
import os
import sys

from .experiments import (
    DESK_SCALE_CAP,
    StartKind,
    compare_variants,
    random_start_study,
    run_sweep,
)
from .model import ModelSpec, Variant, build_problem
from .regression import fit as fit_records
from .render import RenderOptions, render_svg
from .solver import SolverOptions, solve
from .storage import (
    fit_json,
    read_sweep_csv,
    solve_result_json,
    write_sweep_csv,
    write_text_atomic,
)

__all__ = ["main"]


class _UsageError(Exception):
    pass


def _parse_range(text: str, parity: str) -> list[int]:
    try:
        lo_s, hi_s = text.split("..")
        lo, hi = int(lo_s), int(hi_s)
    except ValueError:
        raise _UsageError(f"expected a range like 4..40, got {text!r}")
    if lo > hi:
        raise _UsageError(f"empty range {text!r}")
    want = 0 if parity == "even" else 1
    if lo % 2 != want:
        lo += 1
    return list(range(lo, hi + 1, 2))


def _collect_ns(args) -> list[int]:
    ns: list[int] = []
    if args.n is not None:
        ns.append(args.n)
    if args.ns:
        try:
            ns.extend(int(tok) for tok in args.ns.split(","))
        except ValueError:
            raise _UsageError(f"--ns expects comma-separated integers, got {args.ns!r}")
    if args.even:
        ns.extend(_parse_range(args.even, "even"))
    if args.odd:
        ns.extend(_parse_range(args.odd, "odd"))
    if not ns:
        raise _UsageError("no instances selected; use --n, --ns, --even, or --odd")
    for n in ns:
        if n < 3:
            raise _UsageError(f"need n >= 3, got {n}")
        if n > DESK_SCALE_CAP and not args.allow_large:
            raise _UsageError(
                f"n={n} exceeds the desk-scale cap {DESK_SCALE_CAP}; "
                "pass --allow-large to run it anyway"
            )
    return ns


def _solver_options(args) -> SolverOptions | None:
    if args.tol is None:
        return None
    return SolverOptions(
        violation_target=args.tol, stationarity_target=max(args.tol, 1e-10)
    )


def _default_workers() -> int:
    env = os.environ.get("LSP_LAB_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _add_common(p: argparse.ArgumentParser, multi: bool = True):
    if multi:
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--ns", default=None, help="comma-separated list, e.g. 6,8,10")
        p.add_argument("--even", default=None, metavar="A..B")
        p.add_argument("--odd", default=None, metavar="A..B")
    else:
        p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--model",
        choices=[v.value for v in Variant],
        default=Variant.TIGHTENED.value,
    )
    p.add_argument("--symmetry", action="store_true")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--workers", type=int, default=None)


def _workers(args) -> int:
    return args.workers if args.workers is not None else _default_workers()


def cmd_solve(args) -> int:
    if args.n < 3:
        raise _UsageError(f"need n >= 3, got {args.n}")
    if args.n > DESK_SCALE_CAP and not args.allow_large:
        raise _UsageError(
            f"n={args.n} exceeds the desk-scale cap {DESK_SCALE_CAP}; "
            "pass --allow-large to run it anyway"
        )
    variant = Variant(args.model)
    problem = build_problem(
        ModelSpec(n=args.n, variant=variant, symmetry=args.symmetry)
    )
    report = solve(problem, problem.initial_point, _solver_options(args))

    payload = solve_result_json(
        args.n,
        variant,
        report.objective,
        report.max_violation,
        report.runtime_seconds,
        report.converged,
        report.config,
    )
    if args.json:
        write_text_atomic(args.json, payload)
    else:
        sys.stdout.write(payload)
    if args.svg:
        write_text_atomic(
            args.svg,
            render_svg(report.config, RenderOptions(), objective=report.objective),
        )
    return 0 if report.converged else 2


def cmd_sweep(args) -> int:
    ns = _collect_ns(args)
    records = run_sweep(
        ns,
        Variant(args.model),
        StartKind(),
        _solver_options(args),
        workers=_workers(args),
        allow_large=args.allow_large,
    )
    records = sorted(records, key=lambda rec: rec.n)
    write_sweep_csv(args.csv, records)
    return 0 if all(rec.converged for rec in records) else 2


def cmd_fit(args) -> int:
    if not os.path.exists(args.csv):
        raise _UsageError(f"input file not found: {args.csv}")
    records = read_sweep_csv(args.csv)
    try:
        result = fit_records(records, args.parity)
    except ValueError as exc:
        raise _UsageError(str(exc))
    payload = fit_json(result)
    if args.json:
        write_text_atomic(args.json, payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_compare(args) -> int:
    ns = _collect_ns(args)
    rows = compare_variants(
        ns,
        _solver_options(args),
        workers=_workers(args),
        allow_large=args.allow_large,
    )
    lines = [
        "n,tightened_objective,standard_objective,tightened_gap,standard_gap,"
        "tightened_converged,standard_converged"
    ]
    for row in sorted(rows, key=lambda r: r.n):
        lines.append(
            f"{row.n},{row.tightened_objective:.10f},"
            f"{row.standard_objective:.10f},{row.tightened_gap:.10f},"
            f"{row.standard_gap:.10f},"
            f"{str(row.tightened_converged).lower()},"
            f"{str(row.standard_converged).lower()}"
        )
    write_text_atomic(args.csv, "\n".join(lines) + "\n")
    ok = all(r.tightened_converged and r.standard_converged for r in rows)
    return 0 if ok else 2


def cmd_random(args) -> int:
    if args.n < 3:
        raise _UsageError(f"need n >= 3, got {args.n}")
    starts = args.starts if args.starts is not None else args.n
    if starts < 1:
        raise _UsageError("--starts must be at least 1")
    records = random_start_study(
        args.n,
        starts,
        args.seed,
        _solver_options(args),
        workers=_workers(args),
        allow_large=args.allow_large,
    )
    write_sweep_csv(args.csv, records)
    return 0 if all(rec.converged for rec in records) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsp-lab",
        description="Largest-small-polygon optimization laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance")
    _add_common(p, multi=False)
    p.add_argument("--json", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="solve a set of instances, write CSV")
    _add_common(p)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("fit", help="fit the asymptotic model to a sweep CSV")
    p.add_argument("--csv", required=True)
    p.add_argument("--parity", choices=["even", "odd"], required=True)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare", help="tightened vs standard model")
    _add_common(p)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("random", help="random-start study of the standard model")
    _add_common(p, multi=False)
    p.add_argument("--starts", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", required=True)
    p.set_defaults(func=cmd_random)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
