import math

import pytest

from origin_universality.equilibrium import solve_equilibrium_one_band
from origin_universality.potential import Potential

# Lines recorded by the acceptance suite, echoed in the terminal summary.
ACCEPTANCE_LINES: dict[int, str] = {}

GAUSSIAN = Potential((0.0, 0.0, 1.0))
QUARTIC = Potential((0.0, 0.0, 0.0, 0.0, 1.0))
SKEWED = Potential((0.0, 0.3, 1.0, 0.2, 0.1))


@pytest.fixture(scope="session")
def gaussian():
    return GAUSSIAN


@pytest.fixture(scope="session")
def semicircle():
    return solve_equilibrium_one_band(GAUSSIAN)


@pytest.fixture(scope="session")
def skewed_eq():
    return solve_equilibrium_one_band(SKEWED)


SQRT2 = math.sqrt(2.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
