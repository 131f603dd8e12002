import numpy as np
import pytest

from pcx.analysis import spacetime_scan
from pcx.chain import ChainConfig, SpectralEngine
from pcx.horizon import site_series

RECIPE_FLIPS = (10, 25)
RECIPE_SITE = 17
RECIPE_RADII = (1, 2, 3)
RECIPE_DT = 0.2
RECIPE_TMAX = 200.0


@pytest.fixture(scope="session")
def cfg32():
    return ChainConfig(N=32)


@pytest.fixture(scope="session")
def engine32(cfg32):
    return SpectralEngine(cfg32)


@pytest.fixture(scope="session")
def bethe_engine32(cfg32):
    from pcx.bethe import BetheEngine

    return BetheEngine(cfg32)


@pytest.fixture(scope="session")
def engine8():
    return SpectralEngine(ChainConfig(N=8))


@pytest.fixture(scope="session")
def recipe_series(cfg32, engine32):
    """Site-17 series of the reference recipe, shared across tests."""
    return site_series(cfg32, RECIPE_FLIPS, RECIPE_SITE, RECIPE_RADII,
                       RECIPE_DT, RECIPE_TMAX, engine32)


@pytest.fixture(scope="session")
def recipe_scan(cfg32, engine32):
    """Full default spacetime scan of the reference recipe."""
    return spacetime_scan(cfg32, RECIPE_FLIPS, RECIPE_RADII,
                          RECIPE_DT, RECIPE_TMAX, engine32)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260808)
