import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record():
    """Append one acceptance line; returns whether the comparison held."""
    def _rec(crit, name, value, tol, op="<="):
        value = float(value)
        ok = {"<=": value <= tol, ">=": value >= tol, "<": value < tol}[op]
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  criterion {crit}: {name} = {value:.4g} "
                                f"(required {op} {tol:g})")
        return ok
    return _rec


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
