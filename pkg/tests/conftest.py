"""Shared fixtures and the acceptance-summary reporting hook."""

import os

os.environ.setdefault("MPLBACKEND", "Agg")

import numpy as np
import pytest

from nestscat.capacitance import solve_capacitance
from nestscat.model import MaterialParams, equidistant_geometry


@pytest.fixture(scope="session")
def materials():
    """Reference high-contrast materials, delta = 1/6000."""
    return MaterialParams.from_contrast(1.0 / 6000.0)


@pytest.fixture(scope="session")
def materials_mild():
    """Milder contrast for tests that need headroom above noise floors."""
    return MaterialParams.from_contrast(1e-2)


@pytest.fixture(scope="session")
def geometry1():
    return equidistant_geometry(1)


@pytest.fixture(scope="session")
def geometry2():
    return equidistant_geometry(2)


@pytest.fixture(scope="session")
def geometry4():
    return equidistant_geometry(4)


@pytest.fixture(scope="session")
def cap4(geometry4):
    return solve_capacitance(geometry4)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260814)


# ----------------------------------------------------------------------
# acceptance reporting
#
# Every test named test_criterion_NN_* in test_acceptance.py is echoed at
# the end of the run as one "ACCEPTANCE NN: PASS/FAIL" line so the gate
# can be read without scrolling the full log.


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            nodeid = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid:
                continue
            name = nodeid.split("::", 1)[1]
            num = name.split("_")[2]
            outcomes[num] = "PASS" if status == "passed" else "FAIL"
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(outcomes):
        terminalreporter.write_line(f"ACCEPTANCE {int(num)}: {outcomes[num]}")
