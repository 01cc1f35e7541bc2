import mpmath as mp
import pytest


@pytest.fixture(autouse=True)
def high_precision():
    # comparisons against 40-digit oracles need more than mpmath's default 15 digits
    with mp.workdps(60):
        yield


def pytest_terminal_summary(terminalreporter, config):
    from test_acceptance import ACCEPTANCE_LINES
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
