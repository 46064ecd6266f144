import numpy as np
import pytest

from util import GOLDEN_A

ACCEPTANCE_LINES = []


@pytest.fixture
def golden_A():
    return GOLDEN_A.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20191113)


@pytest.fixture
def record():
    """Record one acceptance line; printed in the terminal summary."""
    def _record(criterion, passed, detail):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(f"[{status}] criterion {criterion}: {detail}")
        return passed
    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
