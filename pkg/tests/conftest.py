import math

import pytest

from rydsim.core import InteractionSpec
from rydsim.dynamics import IntegratorConfig
from rydsim.protocols import CPGSpec, sta_sequence

TWO_PI = 2.0 * math.pi


@pytest.fixture(scope="session")
def sta_pi_schedule():
    """Standard two-qubit pi-gate shortcut schedule at V = 2*pi*40 rad/us."""
    return sta_sequence(CPGSpec(2, (math.pi,)), 1.0, InteractionSpec(TWO_PI * 40.0))


@pytest.fixture(scope="session")
def fast_config():
    """Reduced step count for unit tests that only need qualitative accuracy."""
    return IntegratorConfig(steps=800)
