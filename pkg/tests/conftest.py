import numpy as np
import pytest

from covqsc.grouprep import builtin_rep
from covqsc.protocol import build_protocol

MIXED_FIDUCIAL = np.diag([0.9, 0.1]).astype(complex)


def make_fixture(name: str, copies: int = 1):
    if name == "quaternion_mixed":
        return build_protocol(builtin_rep("quaternion").rep, MIXED_FIDUCIAL, copies)
    b = builtin_rep(name)
    return build_protocol(b.rep, b.fiducial, copies)


@pytest.fixture(scope="session")
def tetra():
    return make_fixture("tetrahedral")


@pytest.fixture(scope="session")
def pauli():
    return make_fixture("pauli2")


@pytest.fixture(scope="session")
def mixed():
    return make_fixture("quaternion_mixed")


@pytest.fixture(scope="session", params=["tetrahedral", "pauli2", "quaternion_mixed"])
def fixture_protocol(request):
    return make_fixture(request.param)


def random_state(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density(rng, dim, rank=None):
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real
