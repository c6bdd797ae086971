import pytest

from lsp_lab.model import ModelSpec, Variant, build_problem
from lsp_lab.solver import solve

_criterion_lines: list[str] = []


def record_criterion(number: int, ok: bool, detail: str) -> None:
    """Collect one pass/fail line per acceptance criterion for the summary."""
    status = "PASS" if ok else "FAIL"
    _criterion_lines.append(f"criterion {number:2d}: {status}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_criterion_lines):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def solved():
    """Session-wide solve cache keyed by (n, variant, options)."""
    cache = {}

    def run(n, variant=Variant.TIGHTENED, opts=None):
        key = (n, variant, opts)
        if key not in cache:
            problem = build_problem(ModelSpec(n=n, variant=variant))
            cache[key] = solve(problem, problem.initial_point, opts)
        return cache[key]

    run.cache = cache
    return run
