import numpy as np
import pytest

from causaldet.distcore import CausalDistribution, causal_from_bell, uniform_distribution
from causaldet.nonsignaling import canonical_ns


def box_obs():
    obs = np.zeros((2, 2, 2))
    obs[0, 0, 0] = obs[1, 1, 0] = obs[0, 1, 1] = obs[1, 1, 1] = 0.5
    return obs


@pytest.fixture
def box():
    """Causal table induced by the canonical two-setting nonsignaling box."""
    return CausalDistribution(box_obs(), np.full((2, 2), 0.5))


@pytest.fixture
def box_bell():
    return canonical_ns(2)


@pytest.fixture
def uniform():
    return uniform_distribution(2)


@pytest.fixture
def ns_causal():
    return lambda m: causal_from_bell(canonical_ns(m))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
