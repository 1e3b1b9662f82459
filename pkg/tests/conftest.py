import os

import pytest

from dochire.model import Instance, load_instance, truthful_bids

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
FIXTURE_E1 = os.path.join(DATA_DIR, "fixture_e1.json")

# One line per acceptance check, echoed after the run (capture-proof).
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixture_e1() -> Instance:
    return load_instance(FIXTURE_E1)


@pytest.fixture(scope="session")
def fixture_e1_bids(fixture_e1):
    return truthful_bids(fixture_e1)
