import numpy as np
import pytest

from monoholo.field import abelian_field, hedgehog_field
from monoholo.scatter import SolverConfig


@pytest.fixture(scope="session")
def hedgehog():
    return hedgehog_field(1.0)


@pytest.fixture(scope="session")
def abelian():
    return abelian_field(1.0)


@pytest.fixture(scope="session")
def cfg():
    return SolverConfig(workers=2)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
