import numpy as np
import pytest

from discrete_ep.rigid_body import InertiaSpec, MoserVeselovLagrangian

_ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance_log(pytestconfig):
    """List of one-line criterion verdicts echoed after the run."""
    return pytestconfig.stash[_ACCEPTANCE]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def inertia():
    return InertiaSpec((1.0, 2.0, 3.0))


@pytest.fixture
def ell(inertia):
    return MoserVeselovLagrangian(inertia)
