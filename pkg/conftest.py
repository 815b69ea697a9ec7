"""
Shared pytest fixtures for molroots
The H3+ solve is computed once per session; bundled systems are cheap
"""

import pytest

from api.config import RunConfig, build_config
from api.groebner import solve_groebner
from api.systems import load_system


@pytest.fixture
def config():
    return build_config()


@pytest.fixture(scope='session')
def two_level():
    return load_system('two-level', RunConfig())


@pytest.fixture(scope='session')
def sqrt_two():
    return load_system('sqrt-two', RunConfig())


@pytest.fixture(scope='session')
def unit_root():
    return load_system('unit-root', RunConfig())


@pytest.fixture(scope='session')
def two_level_solved(two_level):
    return solve_groebner(two_level.system, RunConfig().groebner)


@pytest.fixture(scope='session')
def h3plus():
    """Stationarity system of the embedded printed objective"""
    return load_system('h3plus-reference', RunConfig())


@pytest.fixture(scope='session')
def h3plus_solved(h3plus):
    return solve_groebner(h3plus.system, RunConfig().groebner, h3plus.objective, h3plus.rc)
