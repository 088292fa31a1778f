import numpy as np
import pytest

from benford_mod1 import density_core as dc
from benford_mod1 import distributions as dist


@pytest.fixture
def box2():
    return dist.box_density(2)


@pytest.fixture
def box4():
    return dist.box_density(4)


def quadrature_only(d):
    """Same density with the closed-form spectrum removed (forces quadrature)."""
    return dc.CircleDensity.continuous(d.evaluate, breakpoints=d.breakpoints, label=d.label + "/quad")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
