import warnings

import numpy as np
import pytest

from semiflows.dynamics import Semiflow
from semiflows.space import UniformSpace, cyclic_metric, from_metric


def coarse(n):
    return UniformSpace(n, [np.ones((n, n), dtype=bool)], warn=False)


def two_level(n):
    return UniformSpace(n, [np.ones((n, n), dtype=bool), np.eye(n, dtype=bool)], warn=False)


def cycle_space(n, thresholds=(4, 2, 1)):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return from_metric(cyclic_metric(n), list(thresholds))


def rot(n, k=1):
    return tuple((x + k) % n for x in range(n))


@pytest.fixture
def rotation8():
    return Semiflow(cycle_space(8), [rot(8)])


@pytest.fixture
def doubling8():
    return Semiflow(cycle_space(8), [tuple(2 * x % 8 for x in range(8))])


@pytest.fixture
def id_c0():
    return Semiflow(two_level(2), [(0, 0)])


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
