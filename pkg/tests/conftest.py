import numpy as np
import pytest

from p1stab.geometry import QuadratureGrid


@pytest.fixture(scope="session")
def grid32():
    return QuadratureGrid(32, 32)


@pytest.fixture(scope="session")
def grid48():
    return QuadratureGrid(48, 48)


@pytest.fixture(scope="session")
def grid64():
    return QuadratureGrid(64, 64)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240511)
