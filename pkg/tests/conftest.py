import sys

import pytest

from friedrichs import LevelPair, preset

COULOMB_PAIRS = [(2, 1), (3, 1), (4, 1), (3, 2), (4, 2), (4, 3)]


@pytest.fixture(scope="session")
def coulomb_spec():
    return preset("paper-coulomb")


@pytest.fixture(scope="session")
def osc_spec():
    return preset("paper-osc")


@pytest.fixture(params=COULOMB_PAIRS, ids=lambda p: f"{p[0]}{p[1]}")
def coulomb_pair(request):
    return LevelPair(*request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.summary_lines():
            terminalreporter.write_line(line)
