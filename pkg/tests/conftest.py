import pytest

from boxqm.core import BoxConfig, Quadrature


@pytest.fixture(scope="session")
def cfg():
    return BoxConfig(m=1.0, L=1.0)


@pytest.fixture(scope="session")
def quad(cfg):
    return Quadrature(cfg)
