import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """Record a one-line acceptance verdict, printed in the terminal summary."""

    def record(number, name, passed, detail=""):
        flag = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append((number, f"[{flag}] criterion {number}: {name} {detail}".rstrip()))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
