import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from wavekin.spectral import UniformLogGrid

settings.register_profile(
    "wavekin", deadline=None, max_examples=25,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("wavekin")


@pytest.fixture(scope="session")
def grid4096():
    return UniformLogGrid.dyadic(4096, 128)


@pytest.fixture(scope="session")
def grid2048():
    return UniformLogGrid.dyadic(2048, 64)


@pytest.fixture(scope="session")
def grid1024():
    return UniformLogGrid.dyadic(1024, 64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
