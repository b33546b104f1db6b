"""Lindblad/GKS generators built from Kossakowski matrices.

Conventions used everywhere in the package:

* Superoperators act on column-stacked matrices, ``vec(X)[i + j*n] = X[i, j]``,
  so ``vec(A X B) = (B^T (x) A) vec(X)``.
* Bipartite operators use ``numpy.kron`` ordering, subsystem 1 first.
* The traceless basis is the orthonormalised generalized Gell-Mann set, ordered
  symmetric off-diagonal (j<k, lexicographic), antisymmetric off-diagonal
  (same order), then diagonal ``diag(1,..,1,-l,0,..)/sqrt(l(l+1))`` for
  l = 1..n-1. For n = 2 this is ``(sigma_1, sigma_2, sigma_3)/sqrt(2)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from . import _kernels
from .config import TOL
from .numerics import as_square, check_hermitian

BASIS_TAG = "gell-mann-orthonormal"


@dataclass(frozen=True, eq=False)
class TracelessBasis:
    n: int
    matrices: np.ndarray  # shape (n*n - 1, n, n)

    def __len__(self) -> int:
        return len(self.matrices)

    def gram(self) -> np.ndarray:
        f = self.matrices
        return np.einsum("iab,jab->ij", f.conj(), f)

    def coefficients(self, x) -> np.ndarray:
        """Expansion coefficients ``Tr(F_i^dag X)`` of a traceless matrix."""
        return np.einsum("iab,ab->i", self.matrices.conj(), np.asarray(x))

    def combine(self, coeffs) -> np.ndarray:
        return np.einsum("i,iab->ab", np.asarray(coeffs, dtype=np.complex128), self.matrices)


@lru_cache(maxsize=None)
def _gell_mann(n: int) -> np.ndarray:
    sym, asym, diag = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=np.complex128)
            s[j, k] = s[k, j] = 1
            a = np.zeros((n, n), dtype=np.complex128)
            a[j, k] = -1j
            a[k, j] = 1j
            sym.append(s)
            asym.append(a)
    for l in range(1, n):
        d = np.zeros(n, dtype=np.complex128)
        d[:l] = 1
        d[l] = -l
        diag.append(np.diag(d) * np.sqrt(2.0 / (l * (l + 1))))
    mats = np.array(sym + asym + diag) / np.sqrt(2.0)
    mats.setflags(write=False)
    return mats


def build_traceless_basis(n: int) -> TracelessBasis:
    if int(n) != n or n < 2:
        raise ValueError(f"basis dimension must be an integer >= 2, got {n!r}")
    return TracelessBasis(int(n), _gell_mann(int(n)))


def check_kossakowski(c, n: int | None = None, tol: float = TOL.hermitian) -> np.ndarray:
    """Validate a Kossakowski matrix (Hermitian, and (n^2-1)-dimensional if ``n`` given)."""
    c = check_hermitian(c, tol, name="Kossakowski matrix")
    if n is not None and c.shape[0] != n * n - 1:
        raise ValueError(f"Kossakowski matrix for n={n} must be {n*n-1}x{n*n-1}, got {c.shape}")
    return c


@dataclass(frozen=True, eq=False)
class GeneratorSpec:
    """Effective Hamiltonian plus dissipator ``sum_ij c_ij (F_i . F_j^dag - 1/2 {F_j^dag F_i, .})``."""

    hamiltonian: np.ndarray
    kossakowski: np.ndarray
    basis: TracelessBasis

    def __post_init__(self):
        h = check_hermitian(self.hamiltonian, name="Hamiltonian")
        n = self.basis.n
        if h.shape != (n, n):
            raise ValueError(f"Hamiltonian must be {n}x{n}, got {h.shape}")
        c = check_kossakowski(self.kossakowski, n)
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "kossakowski", c)

    @property
    def n(self) -> int:
        return self.basis.n

    @classmethod
    def from_kossakowski(cls, c, hamiltonian=None) -> "GeneratorSpec":
        c = np.asarray(c, dtype=np.complex128)
        m = c.shape[0]
        n = int(round(np.sqrt(m + 1)))
        if n * n - 1 != m:
            raise ValueError(f"Kossakowski size {m} is not n^2-1 for any n")
        h = np.zeros((n, n), dtype=np.complex128) if hamiltonian is None else hamiltonian
        return cls(h, c, build_traceless_basis(n))

    def with_kossakowski(self, c) -> "GeneratorSpec":
        return GeneratorSpec(self.hamiltonian, c, self.basis)

    def equals(self, other: "GeneratorSpec", atol: float = 0.0) -> bool:
        return (
            self.n == other.n
            and np.allclose(self.hamiltonian, other.hamiltonian, rtol=0, atol=atol)
            and np.allclose(self.kossakowski, other.kossakowski, rtol=0, atol=atol)
        )


def vec(x) -> np.ndarray:
    return np.asarray(x).reshape(-1, order="F")


def unvec(v, n: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if n is None:
        n = int(round(np.sqrt(v.size)))
    return v.reshape(n, n, order="F")


def superop_dim(s) -> int:
    s = np.asarray(s)
    n = int(round(np.sqrt(s.shape[0])))
    if s.ndim != 2 or s.shape[0] != s.shape[1] or n * n != s.shape[0]:
        raise ValueError(f"not a superoperator matrix: shape {s.shape}")
    return n


def apply_superoperator(s, x) -> np.ndarray:
    x = as_square(x, "operand")
    n = superop_dim(s)
    if x.shape[0] != n:
        raise ValueError(f"superoperator acts on {n}x{n} matrices, got {x.shape}")
    return unvec(np.asarray(s) @ vec(x), n)


def superoperator_from_function(fn, n: int) -> np.ndarray:
    """Column-stacked matrix of a linear map given as a Python callable on n x n matrices."""
    s = np.empty((n * n, n * n), dtype=np.complex128)
    for k in range(n * n):
        e = np.zeros(n * n, dtype=np.complex128)
        e[k] = 1
        s[:, k] = vec(fn(unvec(e, n)))
    return s


def identity_superoperator(n: int) -> np.ndarray:
    return np.eye(n * n, dtype=np.complex128)


def transpose_superoperator(n: int) -> np.ndarray:
    return superoperator_from_function(lambda x: x.T, n)


def hamiltonian_superoperator(h) -> np.ndarray:
    """Matrix of ``-i[H, .]``."""
    h = check_hermitian(h, name="Hamiltonian")
    eye = np.eye(h.shape[0], dtype=np.complex128)
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def apply_generator(g: GeneratorSpec, rho) -> np.ndarray:
    rho = as_square(rho, "rho")
    if rho.shape != (g.n, g.n):
        raise ValueError(f"generator acts on {g.n}x{g.n} matrices, got {rho.shape}")
    h, c, f = g.hamiltonian, g.kossakowski, g.basis.matrices
    fdag = f.conj().transpose(0, 2, 1)
    out = -1j * (h @ rho - rho @ h)
    # sum_ij c_ij F_i rho F_j^dag
    out = out + np.einsum("ij,iab,bc,jcd->ad", c, f, rho, fdag)
    # G = sum_ij c_ij F_j^dag F_i
    gm = np.einsum("ij,jab,ibc->ac", c, fdag, f)
    return out - 0.5 * (gm @ rho + rho @ gm)


def superoperator_matrix(g: GeneratorSpec) -> np.ndarray:
    s = _kernels.dissipator_superop(g.kossakowski, g.basis.matrices)
    if np.any(g.hamiltonian):
        s = s + hamiltonian_superoperator(g.hamiltonian)
    return s


@lru_cache(maxsize=None)
def _bipartite_permutation(n1: int, n2: int) -> np.ndarray:
    # index of vec(A (x) B) entry in vec(A) (x) vec(B)
    perm = np.empty(n1 * n1 * n2 * n2, dtype=np.intp)
    N = n1 * n2
    for j1 in range(n1):
        for i1 in range(n1):
            for j2 in range(n2):
                for i2 in range(n2):
                    row = i1 * n2 + i2
                    col = j1 * n2 + j2
                    perm[row + N * col] = (i1 + n1 * j1) * n2 * n2 + (i2 + n2 * j2)
    perm.setflags(write=False)
    return perm


def tensor_product_map(s1, s2) -> np.ndarray:
    """Superoperator of ``map1 (x) map2`` on the bipartite space."""
    n1, n2 = superop_dim(s1), superop_dim(s2)
    p = _bipartite_permutation(n1, n2)
    return np.kron(s1, s2)[np.ix_(p, p)]


def tensor_sum_superoperators(s1, s2) -> np.ndarray:
    """Superoperator of ``L1 (x) id + id (x) L2``."""
    n1, n2 = superop_dim(s1), superop_dim(s2)
    k = np.kron(s1, np.eye(n2**2)) + np.kron(np.eye(n1**2), s2)
    p = _bipartite_permutation(n1, n2)
    return k[np.ix_(p, p)]


def tensor_sum_generator(g1: GeneratorSpec, g2: GeneratorSpec) -> np.ndarray:
    if g1.n != g2.n:
        raise ValueError(f"subsystem dimensions differ: {g1.n} vs {g2.n}")
    return tensor_sum_superoperators(superoperator_matrix(g1), superoperator_matrix(g2))


def block_diag_kossakowski(c1, c2) -> np.ndarray:
    """Coefficient matrix of ``L1 (x) id + id (x) L2`` in the operator set
    ``{F_i (x) I} + {I (x) F_j}``: C1 and C2 on the diagonal blocks."""
    c1 = check_kossakowski(c1)
    c2 = check_kossakowski(c2)
    if c1.shape != c2.shape:
        raise ValueError(f"Kossakowski matrices differ in size: {c1.shape} vs {c2.shape}")
    return scipy.linalg.block_diag(c1, c2)
