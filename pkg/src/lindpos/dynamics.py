"""Semigroup maps exp(Lt), state evolution and the qubit coherence-vector view."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TIME_GRID, TOL
from .generators import apply_superoperator, superop_dim
from .numerics import SIGMA, as_square, check_hermitian, hermiticity_residual, matrix_exponential


class NegativeTimeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian unit-trace matrix.

    Positivity is only enforced with ``strict=True``: evolved operators under
    maps that are not positive are legitimate data and keep their negative
    eigenvalues (see :attr:`min_eigenvalue`).
    """

    matrix: np.ndarray
    strict: bool = True

    def __post_init__(self):
        m = as_square(self.matrix, "density matrix")
        # tolerances scale with the entries: non-positive semigroups can grow without bound
        scale = max(1.0, float(np.max(np.abs(m))))
        asym = hermiticity_residual(m)
        if asym > TOL.hermitian * scale:
            raise ValueError(f"density matrix is not Hermitian (max asymmetry {asym:.3e})")
        tr = np.trace(m)
        if abs(tr - 1) > TOL.hermitian * scale:
            raise ValueError(f"density matrix trace is {tr.real:.15g}, expected 1")
        m = 0.5 * (m + m.conj().T)
        object.__setattr__(self, "matrix", m)
        if self.strict and self.min_eigenvalue < -TOL.positivity:
            raise ValueError(f"density matrix has negative eigenvalue {self.min_eigenvalue:.3e}")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.matrix)[0])

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))


def _matrix_of(rho) -> np.ndarray:
    return rho.matrix if isinstance(rho, DensityMatrix) else as_square(rho, "rho")


def _check_time(t: float) -> float:
    if t < 0:
        raise NegativeTimeError(f"semigroup maps are defined only for t >= 0, got t={t}")
    return float(t)


def evolution_map(generator, t: float) -> np.ndarray:
    """Superoperator of ``gamma_t = exp(L t)``."""
    t = _check_time(t)
    superop_dim(generator)
    return matrix_exponential(generator, t)


def evolve_state(generator, rho0, t: float, known_positive: bool = False) -> DensityMatrix:
    t = _check_time(t)
    out = apply_superoperator(evolution_map(generator, t), _matrix_of(rho0))
    return DensityMatrix(out, strict=known_positive)


def unitary_evolution(h, rho0, t: float) -> DensityMatrix:
    h = check_hermitian(h, name="Hamiltonian")
    rho = _matrix_of(rho0)
    if h.shape != rho.shape:
        raise ValueError(f"dimension mismatch: H {h.shape} vs rho {rho.shape}")
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    return DensityMatrix(u @ rho @ u.conj().T)


def trajectory(generator, rho0, times=DEFAULT_TIME_GRID) -> list[dict]:
    """One record per time: evolved matrix, min eigenvalue, trace residual."""
    rho = _matrix_of(rho0)
    rows = []
    for t in times:
        out = apply_superoperator(evolution_map(generator, t), rho)
        out_h = 0.5 * (out + out.conj().T)
        rows.append(
            {
                "t": float(t),
                "state": out,
                "min_eigenvalue": float(np.linalg.eigvalsh(out_h)[0]),
                "trace_residual": float(abs(np.trace(out) - 1)),
            }
        )
    return rows


def trajectory_csv(rows: list[dict]) -> str:
    n = rows[0]["state"].shape[0]
    header = ["t"]
    for i in range(n):
        for j in range(n):
            header += [f"re_{i}{j}", f"im_{i}{j}"]
    header += ["min_eigenvalue", "trace_residual"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        entries = []
        for z in r["state"].reshape(-1):
            entries += [repr(float(z.real)), repr(float(z.imag))]
        w.writerow([repr(r["t"]), *entries, repr(r["min_eigenvalue"]), repr(r["trace_residual"])])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# qubit coherence vectors: rho = sum_mu v_mu sigma_mu
# ---------------------------------------------------------------------------

def to_coherence_vector(rho) -> np.ndarray:
    m = _matrix_of(rho)
    if m.shape != (2, 2):
        raise ValueError(f"coherence vectors are defined for 2x2 matrices, got {m.shape}")
    return np.real(np.einsum("mab,ba->m", SIGMA, m)) / 2


def from_coherence_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (4,):
        raise ValueError(f"coherence vector must have 4 components, got shape {v.shape}")
    return np.einsum("m,mab->ab", v.astype(np.complex128), SIGMA)


def closed_form_elementary(which: int, v, t: float, rate: float) -> np.ndarray:
    """Closed-form action of the two elementary qubit semigroups on a coherence vector.

    ``which=1`` damps all three Pauli components, ``which=2`` only the sigma_2 one.
    """
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate}")
    v = np.array(v, dtype=float)
    decay = np.exp(-rate * _check_time(t))
    if which == 1:
        v[1:] *= decay
    elif which == 2:
        v[2] *= decay
    else:
        raise ValueError(f"which must be 1 or 2, got {which!r}")
    return v
