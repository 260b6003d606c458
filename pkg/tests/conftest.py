import os

import pytest

from crpdl.msc import read_msc_file

DATA = os.path.join(os.path.dirname(__file__), os.pardir, "src", "crpdl", "data")
CHART = os.path.join(DATA, "chart12.msc")
PINGPONG = os.path.join(DATA, "pingpong.cfm")


@pytest.fixture(scope="session")
def chart():
    return read_msc_file(CHART, 2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
