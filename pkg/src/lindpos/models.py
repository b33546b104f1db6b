"""The counterexample pair of qubit generators and seeded random generators."""
from __future__ import annotations

import numpy as np

from .config import REFERENCE_RATE
from .generators import GeneratorSpec

C_DEPOLARIZING = np.eye(3, dtype=np.complex128)
C_SIGMA2_ONLY = np.diag([1.0, -1.0, 1.0]).astype(np.complex128)


def counterexample_generators(rate: float = REFERENCE_RATE) -> tuple[GeneratorSpec, GeneratorSpec]:
    """``(g1, g2)`` with Kossakowski matrices ``rate/2`` times ``C_DEPOLARIZING``, ``C_SIGMA2_ONLY``.

    With the orthonormal basis ``sigma_i/sqrt(2)``, ``C = I`` damps the Pauli
    components at rate 2, so the factor ``rate/2`` gives decay ``exp(-rate t)``.
    """
    scale = rate / 2.0
    return (
        GeneratorSpec.from_kossakowski(scale * C_DEPOLARIZING),
        GeneratorSpec.from_kossakowski(scale * C_SIGMA2_ONLY),
    )


def random_hermitian(rng: np.random.Generator, m: int, scale: float = 1.0) -> np.ndarray:
    a = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    return scale * (a + a.conj().T) / 2


def random_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    z = (rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_kossakowski(rng: np.random.Generator, n: int, kind: str = "mixed") -> np.ndarray:
    """Random Kossakowski matrix with O(1) rates.

    ``kind='cp'`` gives a positive semidefinite matrix, ``'mixed'`` has
    eigenvalues drawn from [-1, 1.5] (either sign), ``'indefinite'`` at least one
    eigenvalue <= -0.2.
    """
    m = n * n - 1
    u = random_unitary(rng, m)
    if kind == "cp":
        lam = rng.uniform(0.0, 1.5, size=m)
    elif kind == "mixed":
        lam = rng.uniform(-1.0, 1.5, size=m)
    elif kind == "indefinite":
        lam = rng.uniform(-1.0, 1.5, size=m)
        lam[0] = rng.uniform(-1.0, -0.2)
    else:
        raise ValueError(f"unknown kind {kind!r}")
    c = (u * lam) @ u.conj().T
    return (c + c.conj().T) / 2


def random_generator(rng: np.random.Generator, n: int = 2, kind: str = "mixed", with_hamiltonian: bool = True) -> GeneratorSpec:
    h = random_hermitian(rng, n) if with_hamiltonian else None
    return GeneratorSpec.from_kossakowski(random_kossakowski(rng, n, kind), h)
