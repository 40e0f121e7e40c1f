import pytest

from dercalc.algebra import builtin

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def catalog():
    return {key: builtin(spec) for key, spec in
            (("M2", "mat(2)"), ("D2", "dual"), ("F2", "functions(2)"), ("T2", "triangular(2)"))}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
