import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from schwarzflow.model import PhysParams

settings.register_profile("repo", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")


@pytest.fixture
def p_rel():
    return PhysParams(eps=1.0, k=0.3, mass_M=1.0)


@pytest.fixture
def p_nonrel():
    return PhysParams(eps=0.0, k=0.3, m=1.0)


@pytest.fixture
def p_stiff():
    return PhysParams(eps=1.0, k=1.0, mass_M=1.0)


@pytest.fixture
def p_flat():
    return PhysParams(eps=1.0, k=0.3, mass_M=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
