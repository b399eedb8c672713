import numpy as np
import pytest

from ringcdw import RingConfig, make_cosine_profile

ACCEPTANCE_LINES = []


@pytest.fixture
def ring():
    """The reference ring: all units one, a = 0.3 flux quanta."""
    return RingConfig(vector_potential=0.3)


@pytest.fixture
def cdw():
    return make_cosine_profile(0.2)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
