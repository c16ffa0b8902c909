import pytest

import states
from models import OptimizeOptions
from witness import decomposable_witness


@pytest.fixture
def w_de():
    """W_de = -2 |psi-><psi-|^{T_B0}."""
    return decomposable_witness(states.bell("psi-", ("A0", "B0")))


@pytest.fixture
def phi_plus():
    return states.density(states.bell("phi+"))


@pytest.fixture
def phi_minus():
    return states.density(states.bell("phi-"))


@pytest.fixture
def product_00():
    return states.density(states.product_vector([1, 0], [1, 0]))


@pytest.fixture
def quick_opts():
    return OptimizeOptions(restarts=4, max_iter=100, tol=1e-10, seed=3)
