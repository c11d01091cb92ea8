import pytest

# lines appended by tests/test_acceptance.py, printed after the run
ACCEPTANCE_REPORT: list[str] = []


@pytest.fixture
def acceptance_report():
    return ACCEPTANCE_REPORT


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
