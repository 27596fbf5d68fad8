import pytest

from farey_audit.sieves import sieve_build

ACCEPTANCE = []


@pytest.fixture(scope="session")
def table():
    return sieve_build(1_000_000)


@pytest.fixture
def record():
    """Log one PASS/FAIL line for an acceptance criterion, then assert it."""

    def _record(name, ok, detail=""):
        ACCEPTANCE.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
