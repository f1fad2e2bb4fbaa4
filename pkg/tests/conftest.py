import numpy as np
import pytest

from bcsgap import Params

# Coupling band with u2 * a < 1 at tau = 0.9 tau0 (the limit is u2 < 0.30066).
FEASIBLE_U2 = 0.3005

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def params():
    return Params()


@pytest.fixture(scope="session")
def feasible_params():
    return Params(u2=FEASIBLE_U2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
