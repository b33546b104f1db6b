import numpy as np
import pytest

from lindpos.models import counterexample_generators
from lindpos.numerics import SIGMA


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def qubit_pair():
    """Generators whose semigroups damp Pauli components at rate 4."""
    return counterexample_generators(4.0)


def random_density(rng, n, rank=None):
    rank = n if rank is None else rank
    a = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_herm(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


I2, S1, S2, S3 = SIGMA
