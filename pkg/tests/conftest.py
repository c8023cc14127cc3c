"""Shared fixtures; heavy systems are session-scoped."""

import pytest

from susyline import (
    DEFAULT_GRID,
    SMEARING_GRID,
    build_system,
    square_well,
    zero_potential,
)


@pytest.fixture(scope="session")
def grid():
    return DEFAULT_GRID


@pytest.fixture(scope="session")
def sgrid():
    return SMEARING_GRID


@pytest.fixture(scope="session")
def free_pot():
    return zero_potential()


@pytest.fixture(scope="session")
def well_pot():
    return square_well(2.0, 1.0)


@pytest.fixture(scope="session")
def free_regular(free_pot, grid):
    return build_system(free_pot, -0.5 + 1.0j, grid)


@pytest.fixture(scope="session")
def free_singular(free_pot, grid):
    return build_system(free_pot, 1.0j, grid)


@pytest.fixture(scope="session")
def free_singular_b2(free_pot, grid):
    return build_system(free_pot, 2.0j, grid)


@pytest.fixture(scope="session")
def well_regular(well_pot, grid):
    return build_system(well_pot, -0.5 + 1.0j, grid)


@pytest.fixture(scope="session")
def free_regular_s(free_pot, sgrid):
    return build_system(free_pot, -0.5 + 1.0j, sgrid)


@pytest.fixture(scope="session")
def free_singular_b2_s(free_pot, sgrid):
    return build_system(free_pot, 2.0j, sgrid)
