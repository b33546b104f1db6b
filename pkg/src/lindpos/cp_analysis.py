"""Complete-positivity tests, Kraus extraction, the C1 + C2 >= 0 condition for
positive product semigroups and its witness construction, and CP intervals of
perturbed Kossakowski matrices."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .config import TOL
from .generators import (
    GeneratorSpec,
    apply_superoperator,
    check_kossakowski,
    superop_dim,
    superoperator_matrix,
    tensor_sum_superoperators,
    tensor_product_map,
)
from .numerics import check_hermitian, hermiticity_residual, matrix_exponential


class NotCompletelyPositiveError(ValueError):
    pass


class NoWitnessError(ValueError):
    pass


@dataclass(frozen=True)
class CpVerdict:
    is_cp: bool
    min_choi_eigenvalue: float | None
    tolerance: float
    min_kossakowski_eigenvalue: float | None = None
    hermiticity_residual: float = 0.0


@dataclass(frozen=True, eq=False)
class KrausSet:
    """Operators ``K_i`` with ``map(rho) = sum_i K_i rho K_i^dag``.

    The sandwich form with the adjoint on the right; ``V_i = K_i^dag`` gives the
    ``sum_i V_i^dag rho V_i`` ordering.
    """

    operators: np.ndarray  # (r, n, n), Choi weights absorbed
    weights: np.ndarray  # Choi eigenvalues that were kept

    def apply(self, rho) -> np.ndarray:
        k = self.operators
        return np.einsum("kab,bc,kdc->ad", k, np.asarray(rho, dtype=np.complex128), k.conj())

    def superoperator(self) -> np.ndarray:
        return sum(np.kron(k.conj(), k) for k in self.operators)

    def completeness(self) -> np.ndarray:
        k = self.operators
        return np.einsum("kba,kbc->ac", k.conj(), k)


class Lemma1Result(NamedTuple):
    holds: bool
    min_eigenvalue: float


@dataclass(frozen=True, eq=False)
class Lemma1Witness:
    xi: np.ndarray
    W: np.ndarray
    Phi: np.ndarray
    Psi: np.ndarray
    L_value: float
    xi_form: float  # <xi|(C1 + C2)|xi>
    seed: int
    attempts: int
    phi_condition: float
    extras: dict = field(default_factory=dict)

    @property
    def phi(self) -> np.ndarray:
        return self.Phi.reshape(-1)

    @property
    def psi(self) -> np.ndarray:
        return self.Psi.reshape(-1)


def choi_matrix(s) -> np.ndarray:
    """Unnormalised Choi matrix ``sum_ij map(E_ij) (x) E_ij``."""
    s = np.asarray(s, dtype=np.complex128)
    n = superop_dim(s)
    # map(E_ij) = unvec(s[:, i + j n]); choi[(a n + i), (b n + j)] = map(E_ij)[a, b]
    images = s.reshape(n, n, n, n, order="F")  # images[a, b, i, j]
    return images.transpose(0, 2, 1, 3).reshape(n * n, n * n)


def hermiticity_preservation_residual(s, probes: int = 8, seed: int = 0) -> float:
    s = np.asarray(s, dtype=np.complex128)
    n = superop_dim(s)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(probes):
        a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = (a + a.conj().T) / 2
        worst = max(worst, hermiticity_residual(apply_superoperator(s, h)))
    return worst


def is_completely_positive(s, tol: float = TOL.positivity) -> CpVerdict:
    residual = hermiticity_preservation_residual(s)
    if residual > TOL.reconstruction:
        raise ValueError(f"map is not Hermiticity-preserving: residual {residual:.3e}")
    choi = choi_matrix(s)
    lam = float(np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))[0])
    return CpVerdict(lam >= -tol, lam, tol, hermiticity_residual=residual)


def kossakowski_cp_test(c, tol: float = TOL.positivity) -> CpVerdict:
    c = check_kossakowski(c)
    lam = float(np.linalg.eigvalsh(0.5 * (c + c.conj().T))[0])
    return CpVerdict(lam >= -tol, None, tol, min_kossakowski_eigenvalue=lam)


def generator_cp_verdict(g: GeneratorSpec, t: float = 1.0, tol: float = TOL.positivity) -> CpVerdict:
    """Both routes at once: Kossakowski spectrum and the Choi spectrum of ``exp(L t)``.

    ``is_cp`` follows the Kossakowski route, which decides the whole semigroup.
    """
    kv = kossakowski_cp_test(g.kossakowski, tol)
    cv = is_completely_positive(matrix_exponential(superoperator_matrix(g), t), tol)
    return CpVerdict(
        kv.is_cp,
        cv.min_choi_eigenvalue,
        tol,
        min_kossakowski_eigenvalue=kv.min_kossakowski_eigenvalue,
        hermiticity_residual=cv.hermiticity_residual,
    )


def kraus_decomposition(choi, tol: float = TOL.positivity, rel_cut: float = 1e-12) -> KrausSet:
    choi = check_hermitian(choi, TOL.reconstruction, name="Choi matrix")
    nn = choi.shape[0]
    n = int(round(np.sqrt(nn)))
    w, v = np.linalg.eigh(0.5 * (choi + choi.conj().T))
    if w[0] < -tol:
        raise NotCompletelyPositiveError(f"Choi matrix has negative eigenvalue {w[0]:.3e}; map is not CP")
    keep = w > rel_cut * max(w[-1], 0.0)
    if not np.any(keep):
        return KrausSet(np.zeros((0, n, n), dtype=np.complex128), np.zeros(0))
    w, v = w[keep][::-1], v[:, keep][:, ::-1]
    # choi[(a n + i), (b n + j)] = K[a, i] conj(K[b, j])  =>  K = v.reshape(n, n)
    ops = np.sqrt(w)[:, None, None] * v.T.reshape(-1, n, n)
    return KrausSet(ops, w)


# ---------------------------------------------------------------------------
# necessary condition C1 + C2 >= 0 and its witness
# ---------------------------------------------------------------------------

def lemma1_condition(c1, c2, tol: float = TOL.positivity) -> Lemma1Result:
    c1 = check_kossakowski(c1)
    c2 = check_kossakowski(c2)
    if c1.shape != c2.shape:
        raise ValueError(f"Kossakowski matrices differ in size: {c1.shape} vs {c2.shape}")
    s = c1 + c2
    lam = float(np.linalg.eigvalsh(0.5 * (s + s.conj().T))[0])
    return Lemma1Result(lam >= -tol, lam)


def transpose_similarity(w, rng: np.random.Generator, max_cond: float = 1e8, max_tries: int = 200):
    """Invertible ``Phi`` with ``Phi^-1 W Phi = W^T``.

    Solves ``W Phi - Phi W^T = 0`` and draws random combinations of the
    solution space until one is well conditioned.
    """
    w = np.asarray(w, dtype=np.complex128)
    n = w.shape[0]
    eye = np.eye(n)
    # column stacking: vec(W Phi) = (I (x) W) vec Phi, vec(Phi W^T) = (W (x) I) vec Phi
    system = np.kron(eye, w) - np.kron(w, eye)
    basis = scipy.linalg.null_space(system, rcond=1e-10)
    if basis.shape[1] == 0:  # pragma: no cover - every matrix is similar to its transpose
        raise RuntimeError("empty solution space for W Phi = Phi W^T")
    for attempt in range(1, max_tries + 1):
        coeffs = rng.normal(size=basis.shape[1]) + 1j * rng.normal(size=basis.shape[1])
        phi = (basis @ coeffs).reshape(n, n, order="F")
        phi /= np.linalg.norm(phi)
        cond = np.linalg.cond(phi)
        if cond < max_cond:
            return phi, attempt, float(cond)
    raise RuntimeError(f"no invertible similarity found in {max_tries} draws")


def witness_value(g1: GeneratorSpec, g2: GeneratorSpec, phi, psi) -> float:
    """``<phi| (L1 (x) id + id (x) L2)[|psi><psi|] |phi>`` evaluated directly."""
    lsum = tensor_sum_superoperators(superoperator_matrix(g1), superoperator_matrix(g2))
    phi = np.asarray(phi, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    out = apply_superoperator(lsum, np.outer(psi, psi.conj()))
    return float(np.real(phi.conj() @ out @ phi))


def short_time_value(g1: GeneratorSpec, g2: GeneratorSpec, phi, psi, t: float) -> float:
    """``<phi| (gamma1_t (x) gamma2_t)[|psi><psi|] |phi>`` for normalised phi, psi."""
    phi = np.asarray(phi, dtype=np.complex128)
    psi = np.asarray(psi, dtype=np.complex128)
    phi = phi / np.linalg.norm(phi)
    psi = psi / np.linalg.norm(psi)
    m = tensor_product_map(
        matrix_exponential(superoperator_matrix(g1), t),
        matrix_exponential(superoperator_matrix(g2), t),
    )
    out = apply_superoperator(m, np.outer(psi, psi.conj()))
    return float(np.real(phi.conj() @ out @ phi))


def lemma1_witness(
    g1: GeneratorSpec,
    g2: GeneratorSpec,
    seed: int = 0,
    tol: float = TOL.positivity,
    short_time: float = 1e-3,
) -> Lemma1Witness:
    """Orthogonal ``|phi>, |psi>`` with ``<phi|L[|psi><psi|]|phi> = <xi|(C1+C2)|xi> < 0``.

    ``xi`` is the lowest eigenvector of ``C1 + C2`` and ``W = sum_i xi_i F_i``;
    ``Phi`` solves ``Phi^-1 W Phi = W^T`` and ``Psi^dag = W^T Phi^-1`` so that
    ``W = Phi Psi^dag``. Coefficient matrices are read row-major into vectors
    (``|j> (x) |k>`` has index ``j n + k``).
    """
    if g1.n != g2.n:
        raise ValueError(f"subsystem dimensions differ: {g1.n} vs {g2.n}")
    total = g1.kossakowski + g2.kossakowski
    w_eig, v_eig = np.linalg.eigh(0.5 * (total + total.conj().T))
    if w_eig[0] >= -tol:
        raise NoWitnessError(f"C1 + C2 >= 0 (min eigenvalue {w_eig[0]:.3e}): no witness exists")
    xi = v_eig[:, 0]
    w = g1.basis.combine(xi)
    rng = np.random.default_rng(seed)
    phi_m, attempts, cond = transpose_similarity(w, rng)
    psi_dag = w.T @ np.linalg.inv(phi_m)
    psi_m = psi_dag.conj().T
    xi_form = float(np.real(xi.conj() @ total @ xi))
    l_value = witness_value(g1, g2, phi_m.reshape(-1), psi_m.reshape(-1))
    wit = Lemma1Witness(
        xi=xi,
        W=w,
        Phi=phi_m,
        Psi=psi_m,
        L_value=l_value,
        xi_form=xi_form,
        seed=seed,
        attempts=attempts,
        phi_condition=cond,
    )
    norm2 = np.linalg.norm(phi_m) ** 2 * np.linalg.norm(psi_m) ** 2
    wit.extras.update(
        {
            "overlap": complex(np.vdot(wit.phi, wit.psi)),
            "factorization_residual": float(np.max(np.abs(phi_m @ psi_m.conj().T - w))),
            "normalized_rate": l_value / norm2,
            "short_time": short_time,
            "short_time_value": short_time_value(g1, g2, wit.phi, wit.psi, short_time),
        }
    )
    return wit


# ---------------------------------------------------------------------------
# perturbations C + eps Gamma
# ---------------------------------------------------------------------------

def perturbation_cp_interval(c, gamma, eps_max: float, tol: float = TOL.positivity, xtol: float = 1e-12) -> float:
    """Largest ``eps0`` in ``[0, eps_max]`` with ``C + eps Gamma >= -tol`` on all of ``[0, eps0]``.

    The smallest eigenvalue is concave in ``eps``, so the feasible set is an
    interval containing 0 and bisection on its right end is exact.
    """
    c = check_kossakowski(c)
    gamma = check_hermitian(gamma, name="perturbation")
    if gamma.shape != c.shape:
        raise ValueError(f"perturbation shape {gamma.shape} differs from {c.shape}")
    if eps_max < 0:
        raise ValueError(f"eps_max must be >= 0, got {eps_max}")

    def lam(eps: float) -> float:
        m = c + eps * gamma
        return float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])

    if lam(0.0) < -tol:
        raise NotCompletelyPositiveError(
            f"unperturbed Kossakowski matrix is not positive semidefinite (min eigenvalue {lam(0.0):.3e})"
        )
    if lam(eps_max) >= -tol:
        return float(eps_max)
    lo, hi = 0.0, float(eps_max)
    while hi - lo > xtol * max(1.0, eps_max):
        mid = 0.5 * (lo + hi)
        if lam(mid) >= -tol:
            lo = mid
        else:
            hi = mid
    return lo
