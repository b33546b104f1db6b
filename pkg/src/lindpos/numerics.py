"""Dense complex linear algebra primitives.

Matrices are plain ``numpy`` arrays of dtype complex128.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .config import TOL


class NotHermitianError(ValueError):
    """Raised when a matrix expected to be Hermitian is not, within tolerance."""

    def __init__(self, asymmetry: float, tol: float, name: str = "matrix"):
        super().__init__(f"{name} is not Hermitian: max |H - H^dag| = {asymmetry:.3e} > {tol:.1e}")
        self.asymmetry = asymmetry
        self.tol = tol


class HermitianEigensystem(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {m.shape}")
    return m


def as_square(a, name: str = "matrix") -> np.ndarray:
    m = as_matrix(a, name)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    return m


def hermiticity_residual(h) -> float:
    h = np.asarray(h)
    if h.size == 0:
        return 0.0
    return float(np.max(np.abs(h - h.conj().T)))


def check_hermitian(h, tol: float = TOL.hermitian, name: str = "matrix") -> np.ndarray:
    """Return ``h`` as a complex square array, raising if it is not Hermitian."""
    h = as_square(h, name)
    asym = hermiticity_residual(h)
    if asym > tol:
        raise NotHermitianError(asym, tol, name)
    return h


def hermitian_eigensystem(h, tol: float = TOL.hermitian) -> HermitianEigensystem:
    h = check_hermitian(h, tol)
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return HermitianEigensystem(w, v)


def min_eigenvalue(h, tol: float = TOL.hermitian) -> float:
    h = check_hermitian(h, tol)
    return float(np.linalg.eigvalsh(0.5 * (h + h.conj().T))[0])


def is_normal(a: np.ndarray, rtol: float = 1e-12) -> bool:
    comm = a @ a.conj().T - a.conj().T @ a
    scale = max(np.linalg.norm(a, 2) ** 2, 1.0)
    return float(np.linalg.norm(comm, 2)) <= rtol * scale


def matrix_exponential(a, t: float = 1.0) -> np.ndarray:
    """``exp(t * a)``.

    Normal matrices go through a complex Schur (= unitary eigen) decomposition,
    everything else through scaling and squaring with a Pade approximant.
    ``t == 0`` returns the identity exactly.
    """
    a = as_square(a)
    n = a.shape[0]
    if t == 0:
        return np.eye(n, dtype=np.complex128)
    ta = t * a
    if is_normal(ta):
        tri, z = scipy.linalg.schur(ta, output="complex")
        return (z * np.exp(np.diag(tri))) @ z.conj().T
    return scipy.linalg.expm(ta)


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a, "A"), as_matrix(b, "B"))


def expectation(a, rho) -> float:
    """``Tr(A rho)`` for Hermitian ``A``; the imaginary residue must vanish."""
    a = check_hermitian(a, name="observable")
    rho = as_square(getattr(rho, "matrix", rho), "rho")
    if a.shape != rho.shape:
        raise ValueError(f"dimension mismatch: observable {a.shape} vs state {rho.shape}")
    value = np.trace(a @ rho)
    if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
        raise ValueError(f"expectation value has imaginary part {value.imag:.3e}; is rho Hermitian?")
    return float(value.real)


# Pauli matrices, sigma_0 = identity.
SIGMA = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)
