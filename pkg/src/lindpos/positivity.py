"""Positivity searches over pure states and the closed-form qubit counterexample.

A sampling search can only report "no violation found within budget"; the
exceptions are the qubit determinant/contraction test and the closed-form
counterexample, which are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .config import DEFAULT_TIME_GRID, REFERENCE_RATE, TOL
from .cp_analysis import NoWitnessError, kossakowski_cp_test, lemma1_witness
from .dynamics import evolution_map
from .generators import (
    GeneratorSpec,
    apply_superoperator,
    build_traceless_basis,
    superop_dim,
    superoperator_matrix,
    tensor_product_map,
    tensor_sum_generator,
)
from .numerics import SIGMA, matrix_exponential

POSITIVE = "positive-within-budget"
VIOLATION = "violation-found"

DEFAULT_BUDGET = 2000
DEFAULT_REFINE_STEPS = 200


class PreconditionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Schmidt states
# ---------------------------------------------------------------------------

def _sigma2_frame(alpha: float, varphi: float) -> np.ndarray:
    # columns |phi_1>, |phi_2> with <phi_1|s2|phi_1> = cos a, <phi_2|s2|phi_1> = e^{i varphi} sin a
    plus = np.array([1, 1j]) / np.sqrt(2)
    minus = np.array([1, -1j]) / np.sqrt(2)
    c, s = math.cos(alpha / 2), math.sin(alpha / 2)
    phi1 = c * plus + s * minus
    phi2 = -np.exp(-1j * varphi) * (-s * plus + c * minus)
    return np.column_stack([phi1, phi2])


@dataclass(frozen=True, eq=False)
class SchmidtState:
    """``|psi> = sum_i sqrt(weights_i) |frame1[:, i]> (x) |frame2[:, i]>``."""

    weights: np.ndarray
    frame1: np.ndarray
    frame2: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if np.any(w < -1e-15) or abs(w.sum() - 1) > 1e-12:
            raise ValueError(f"Schmidt weights must be nonnegative and sum to 1, got {w}")
        for name in ("frame1", "frame2"):
            f = np.asarray(getattr(self, name), dtype=np.complex128)
            if f.shape != (len(w), len(w)) or np.max(np.abs(f.conj().T @ f - np.eye(len(w)))) > 1e-12:
                raise ValueError(f"{name} must be a {len(w)}x{len(w)} unitary")
            object.__setattr__(self, name, f)
        object.__setattr__(self, "weights", np.clip(w, 0.0, None))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def mu(self) -> float:
        return float(self.weights[0])

    @property
    def alpha(self) -> float:
        """Angle with ``<phi_1^(2)|sigma_2|phi_1^(2)> = cos(alpha)`` (qubits only)."""
        f = self.frame2
        c = np.real(f[:, 0].conj() @ SIGMA[2] @ f[:, 0])
        s = abs(f[:, 1].conj() @ SIGMA[2] @ f[:, 0])
        return float(math.atan2(s, c))

    @property
    def varphi(self) -> float:
        f = self.frame2
        return float(np.angle(f[:, 1].conj() @ SIGMA[2] @ f[:, 0]))

    def vector(self) -> np.ndarray:
        s = np.sqrt(self.weights)
        return np.einsum("i,ai,bi->ab", s, self.frame1, self.frame2).reshape(-1)

    def projector(self) -> np.ndarray:
        v = self.vector()
        return np.outer(v, v.conj())

    @classmethod
    def from_angles(cls, mu: float, alpha: float, varphi: float, frame1=None) -> "SchmidtState":
        if not 0.0 <= mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {mu}")
        f1 = np.eye(2, dtype=np.complex128) if frame1 is None else frame1
        return cls(np.array([mu, 1.0 - mu]), f1, _sigma2_frame(alpha, varphi))

    @classmethod
    def from_vector(cls, psi, n: int) -> "SchmidtState":
        psi = np.asarray(psi, dtype=np.complex128)
        psi = psi / np.linalg.norm(psi)
        u, s, vh = np.linalg.svd(psi.reshape(n, n))
        w = s**2
        return cls(w / w.sum(), u, vh.T)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class PositivityReport:
    min_eigenvalue_found: float
    witness_state: np.ndarray
    witness_time: float
    samples_used: int
    refinement_steps: int
    verdict: str
    seed: int = 0
    tolerance: float = TOL.positivity
    per_time: list = field(default_factory=list)
    min_determinant: float | None = None
    certified: bool = False
    note: str = ""

    @property
    def violation(self) -> bool:
        return self.verdict == VIOLATION

    def reevaluate(self, superop) -> float:
        return float(_kernels.pure_output_min_eig(np.asarray(superop), self.witness_state[None, :])[0])


def _verdict(value: float, tol: float) -> str:
    return VIOLATION if value < -tol else POSITIVE


def haar_states(rng: np.random.Generator, count: int, d: int) -> np.ndarray:
    z = rng.normal(size=(count, d)) + 1j * rng.normal(size=(count, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# local refinement: coordinate descent with golden-section line search
# ---------------------------------------------------------------------------

_GOLD = (math.sqrt(5) - 1) / 2


def golden_section(fn: Callable[[float], float], a: float, b: float, iters: int = 24) -> tuple[float, float]:
    c, d = b - _GOLD * (b - a), a + _GOLD * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = fn(d)
    return (c, fc) if fc < fd else (d, fd)


def _unitary(gen: np.ndarray, x: float) -> np.ndarray:
    w, v = np.linalg.eigh(gen)
    return (v * np.exp(1j * x * w)) @ v.conj().T


class _Chart:
    """Local coordinates around a pure state: either a unitary orbit on C^d or
    Schmidt weights plus local unitaries on C^n (x) C^n."""

    def __init__(self, psi: np.ndarray, bipartite_n: int | None):
        self.n = bipartite_n
        if bipartite_n is None:
            d = len(psi)
            self.gens = build_traceless_basis(d).matrices if d >= 2 else np.zeros((0, 1, 1))
            self.psi = psi
            self.ncoords = len(self.gens)
        else:
            st = SchmidtState.from_vector(psi, bipartite_n)
            self.amps = np.sqrt(st.weights)
            self.u1, self.u2 = st.frame1, st.frame2
            self.gens = build_traceless_basis(bipartite_n).matrices
            m = len(self.gens)
            self.ncoords = 2 * m + bipartite_n

    def state(self, k: int | None = None, x: float = 0.0) -> np.ndarray:
        if self.n is None:
            if k is None or x == 0.0:
                return self.psi
            return _unitary(self.gens[k], x) @ self.psi
        amps, u1, u2 = self.amps, self.u1, self.u2
        if k is not None and x != 0.0:
            m = len(self.gens)
            if k < m:
                u1 = _unitary(self.gens[k], x) @ u1
            elif k < 2 * m:
                u2 = _unitary(self.gens[k - m], x) @ u2
            else:
                amps = amps.copy()
                amps[k - 2 * m] += x
                amps = amps / np.linalg.norm(amps)
        return np.einsum("i,ai,bi->ab", amps, u1, u2).reshape(-1)

    def accept(self, k: int, x: float) -> None:
        if self.n is None:
            self.psi = self.state(k, x)
            return
        m = len(self.gens)
        if k < m:
            self.u1 = _unitary(self.gens[k], x) @ self.u1
        elif k < 2 * m:
            self.u2 = _unitary(self.gens[k - m], x) @ self.u2
        else:
            amps = self.amps.copy()
            amps[k - 2 * m] += x
            self.amps = amps / np.linalg.norm(amps)


def refine_state(superop, psi, steps: int = DEFAULT_REFINE_STEPS, radius: float = 0.5):
    """Coordinate descent on ``lambda_min(map(|psi><psi|))``. Returns ``(psi, value, steps)``."""
    s = np.ascontiguousarray(superop, dtype=np.complex128)
    d = len(psi)
    n = int(round(math.sqrt(d)))
    chart = _Chart(np.asarray(psi, dtype=np.complex128), n if n * n == d and n >= 2 else None)

    def objective(k, x):
        return float(_kernels.pure_output_min_eig(s, chart.state(k, x)[None, :])[0])

    best = objective(None, 0.0)
    if chart.ncoords == 0:
        return chart.state(), best, 0
    done = 0
    stalled = 0
    while done < steps:
        k = done % chart.ncoords
        x, fx = golden_section(lambda x: objective(k, x), -radius, radius)
        done += 1
        if fx < best - 1e-15:
            chart.accept(k, x)
            best = objective(None, 0.0)
            stalled = 0
        else:
            stalled += 1
        if stalled >= chart.ncoords:
            radius *= 0.3
            stalled = 0
            if radius < 1e-9:
                break
    return chart.state(), best, done


# ---------------------------------------------------------------------------
# searches
# ---------------------------------------------------------------------------

def min_output_eigenvalue(
    superop,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    refine_steps: int = DEFAULT_REFINE_STEPS,
    time: float = 0.0,
    stream: int = 0,
    extra_states: Sequence[np.ndarray] = (),
    tol: float = TOL.positivity,
) -> PositivityReport:
    """Smallest eigenvalue of ``map(|psi><psi|)`` over sampled and refined pure states.

    Positivity on pure states implies positivity on all states, so only pure
    inputs are searched. Samples for ``(seed, stream)`` are drawn in one batch,
    so the same arguments give bit-identical results.
    """
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    s = np.ascontiguousarray(superop, dtype=np.complex128)
    d = superop_dim(s)
    rng = np.random.default_rng([seed, stream])
    psis = haar_states(rng, budget, d)
    if len(extra_states):
        extra = np.array([np.asarray(e, dtype=np.complex128) / np.linalg.norm(e) for e in extra_states])
        psis = np.vstack([extra, psis])
    vals = _kernels.pure_output_min_eig(s, psis)
    i = int(np.argmin(vals))
    psi, best, steps = psis[i], float(vals[i]), 0
    if refine_steps > 0:
        cand, val, steps = refine_state(s, psi, refine_steps)
        if val < best:
            psi, best = cand, val
    return PositivityReport(best, psi, float(time), len(psis), steps, _verdict(best, tol), seed, tol)


def scan_positivity(
    map_at: Callable[[float], np.ndarray],
    times: Sequence[float] = DEFAULT_TIME_GRID,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    refine_steps: int = DEFAULT_REFINE_STEPS,
    extra_states: Sequence[np.ndarray] = (),
    tol: float = TOL.positivity,
) -> PositivityReport:
    """Run :func:`min_output_eigenvalue` on ``map_at(t)`` for every grid time; keep the worst."""
    worst = None
    per_time = []
    samples = steps = 0
    for idx, t in enumerate(times):
        rep = min_output_eigenvalue(map_at(t), budget, seed, refine_steps, t, idx, extra_states, tol)
        per_time.append((float(t), rep.min_eigenvalue_found))
        samples += rep.samples_used
        steps += rep.refinement_steps
        if worst is None or rep.min_eigenvalue_found < worst.min_eigenvalue_found:
            worst = rep
    worst.per_time = per_time
    worst.samples_used = samples
    worst.refinement_steps = steps
    if not worst.violation:
        worst.note = "no violation found within budget; sampling cannot certify positivity"
    return worst


def product_evolution(g1: GeneratorSpec, g2: GeneratorSpec) -> Callable[[float], np.ndarray]:
    s1, s2 = superoperator_matrix(g1), superoperator_matrix(g2)
    return lambda t: tensor_product_map(evolution_map(s1, t), evolution_map(s2, t))


def tensor_positivity(g1, g2, times=DEFAULT_TIME_GRID, budget=DEFAULT_BUDGET, seed=0,
                      refine_steps=DEFAULT_REFINE_STEPS, tol=TOL.positivity) -> PositivityReport:
    """Search for a pure state driven negative by ``gamma1_t (x) gamma2_t``.

    When ``C1 + C2`` has a negative eigenvalue the constructive witness state is
    added to the sample pool.
    """
    if g1.n != g2.n:
        raise ValueError(f"subsystem dimensions differ: {g1.n} vs {g2.n}")
    extra = []
    try:
        wit = lemma1_witness(g1, g2, seed=seed, tol=tol)
        extra.append(wit.psi)
    except NoWitnessError:
        pass
    return scan_positivity(product_evolution(g1, g2), times, budget, seed, refine_steps, extra, tol)


def pauli_transfer_matrix(superop) -> np.ndarray:
    """``T[mu, nu] = Tr(sigma_mu map(sigma_nu)) / 2`` for a qubit map."""
    s = np.asarray(superop)
    if superop_dim(s) != 2:
        raise ValueError("Pauli transfer matrix needs a qubit map")
    out = np.empty((4, 4))
    for nu in range(4):
        img = apply_superoperator(s, SIGMA[nu])
        out[:, nu] = np.real(np.einsum("mab,ba->m", SIGMA, img)) / 2
    return out


def single_map_positivity_2d(
    generator,
    times: Sequence[float] = DEFAULT_TIME_GRID,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    tol: float = 1e-12,
) -> PositivityReport:
    """Positivity of the qubit semigroup ``exp(L t)`` on a time grid.

    Pure states are sampled and ``det(map(rho)) >= -tol`` is checked (a unit-trace
    Hermitian 2x2 matrix is positive iff its determinant is >= 0). For unital,
    trace-preserving maps the Bloch-ball contraction ``||T_3x3|| <= 1`` is also
    evaluated, which certifies positivity exactly.
    """
    s_gen = np.asarray(generator, dtype=np.complex128)
    if superop_dim(s_gen) != 2:
        raise ValueError(f"single_map_positivity_2d needs a qubit map, got {s_gen.shape}")
    min_det = np.inf
    min_eig = np.inf
    witness = None
    wtime = 0.0
    certified = True
    per_time = []
    for idx, t in enumerate(times):
        m = evolution_map(s_gen, t)
        rng = np.random.default_rng([seed, idx])
        psis = haar_states(rng, budget, 2)
        proj = psis[:, :, None] * psis.conj()[:, None, :]
        vecs = proj.transpose(0, 2, 1).reshape(budget, 4)
        outs = (vecs @ m.T).reshape(budget, 2, 2).transpose(0, 2, 1)
        dets = np.real(np.linalg.det(outs))
        eigs = _kernels.pure_output_min_eig(m, psis)
        j = int(np.argmin(dets))
        per_time.append((float(t), float(eigs.min())))
        if dets[j] < min_det:
            min_det = float(dets[j])
        if eigs.min() < min_eig:
            min_eig = float(eigs.min())
            witness, wtime = psis[int(np.argmin(eigs))], float(t)
        tm = pauli_transfer_matrix(m)
        unital = np.allclose(tm[0], [1, 0, 0, 0], atol=1e-12) and np.allclose(tm[1:, 0], 0, atol=1e-12)
        if not (unital and np.linalg.norm(tm[1:, 1:], 2) <= 1 + 1e-12):
            certified = False
    verdict = VIOLATION if min_det < -tol else POSITIVE
    note = "Bloch-ball contraction certifies positivity" if certified else "sampled determinant check only"
    return PositivityReport(
        min_eig, witness, wtime, budget * len(times), 0, verdict, seed, tol,
        per_time=per_time, min_determinant=min_det, certified=certified and verdict == POSITIVE, note=note,
    )


def theorem5_breakdown_search(
    g: GeneratorSpec,
    times: Sequence[float] = DEFAULT_TIME_GRID,
    budget: int = DEFAULT_BUDGET,
    seed: int = 0,
    refine_steps: int = DEFAULT_REFINE_STEPS,
    tol: float = TOL.positivity,
) -> PositivityReport:
    """Look for an entangled state made non-positive by ``gamma_t (x) gamma_t``.

    Requires ``gamma_t`` positive on the grid and not CP. A positive result here
    only means the budget was too small: such a state always exists.
    """
    if kossakowski_cp_test(g.kossakowski, tol).is_cp:
        raise PreconditionError("generator is completely positive; gamma_t (x) gamma_t is positive")
    s = superoperator_matrix(g)
    if g.n == 2:
        single = single_map_positivity_2d(s, times, min(budget, 500), seed)
    else:
        single = scan_positivity(lambda t: evolution_map(s, t), times, budget, seed, refine_steps, (), tol)
    if single.violation:
        raise PreconditionError(
            f"gamma_t itself is not positive (min eigenvalue {single.min_eigenvalue_found:.3e} at t={single.witness_time})"
        )
    report = tensor_positivity(g, g, times, budget, seed, refine_steps, tol)
    if not report.violation:
        report.note = "inconclusive: no violation found within budget, although one must exist"
    return report


# ---------------------------------------------------------------------------
# closed-form counterexample
# ---------------------------------------------------------------------------

def _check_mu_t(mu: float, t: float) -> None:
    if not 0.0 <= mu <= 1.0:
        raise ValueError(f"mu must lie in [0, 1], got {mu}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")


def counterexample_Zt(mu: float, alpha: float, varphi: float, t: float, rate: float = REFERENCE_RATE) -> np.ndarray:
    _check_mu_t(mu, t)
    a = math.exp(-rate * t)
    off = math.sin(alpha) * a * math.sqrt(mu * (1 - mu))
    return np.array(
        [
            [0.5 * math.cos(alpha) * (2 * mu - 1 + a), np.exp(1j * varphi) * off],
            [np.exp(-1j * varphi) * off, 0.5 * math.cos(alpha) * (2 * mu - 1 - a)],
        ],
        dtype=np.complex128,
    )


def counterexample_eigenvalues(mu: float, alpha: float, t: float, rate: float = REFERENCE_RATE) -> tuple[float, float]:
    """Doubly degenerate eigenvalues ``(z_plus, z_minus)`` of the mixing term."""
    _check_mu_t(mu, t)
    # 1 - (1 - a^2)(1 - q) rewritten as a^2 + q (1 - a^2): no cancellation at large t
    a2 = math.exp(-2 * rate * t)
    q = math.sin(alpha) ** 2 * (1 - 2 * mu) ** 2
    root = math.sqrt(a2 + q * -math.expm1(-2 * rate * t))
    pref = -0.25 * math.expm1(-rate * t)
    return pref * (1 + root), pref * (1 - root)


def counterexample_terms(state: SchmidtState, t: float, rate: float = REFERENCE_RATE) -> tuple[np.ndarray, np.ndarray]:
    """``(exp(-rate t) rho, mixing term)`` whose sum is the evolved state.

    Subsystem 1 carries ``Z_t`` in its Schmidt frame, subsystem 2 its reduced
    state ``diag(mu, 1-mu)`` in its Schmidt frame and ``sigma_2``.
    """
    if state.n != 2:
        raise ValueError("the closed-form counterexample is for qubit pairs")
    a = math.exp(-rate * t)
    rho = state.projector()
    z = counterexample_Zt(state.mu, state.alpha, state.varphi, t, rate)
    u1, u2 = state.frame1, state.frame2
    reduced2 = (u2 * state.weights) @ u2.conj().T
    z_lab = u1 @ z @ u1.conj().T
    second = 0.5 * (1 - a) * (np.kron(SIGMA[0], reduced2) - np.kron(z_lab, SIGMA[2]))
    return a * rho, second


def counterexample_rho_t(state: SchmidtState, t: float, rate: float = REFERENCE_RATE) -> np.ndarray:
    first, second = counterexample_terms(state, t, rate)
    return first + second


@dataclass
class CounterexampleReport:
    rate: float
    entries: list
    max_state_residual: float
    max_eigen_residual: float
    min_z: float
    min_state_eigenvalue: float
    refined_min_z: float | None = None
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def verify_counterexample(
    mus: Sequence[float] = (0.0, 0.25, 0.5, 0.75, 1.0),
    alphas: Sequence[float] = (0.0, math.pi / 4, math.pi / 2),
    varphis: Sequence[float] = (0.0, math.pi / 3),
    times: Sequence[float] = DEFAULT_TIME_GRID,
    rate: float = REFERENCE_RATE,
    frame1=None,
    refine: bool = True,
) -> CounterexampleReport:
    """Closed form vs numerical tensor-sum evolution over a parameter grid."""
    from .models import counterexample_generators

    g1, g2 = counterexample_generators(rate)
    lsum = tensor_sum_generator(g1, g2)
    maps = {float(t): evolution_map(lsum, t) for t in times}
    entries = []
    for mu in mus:
        for alpha in alphas:
            for varphi in varphis:
                state = SchmidtState.from_angles(mu, alpha, varphi, frame1)
                rho0 = state.projector()
                for t in times:
                    first, second = counterexample_terms(state, t, rate)
                    closed = first + second
                    numeric = apply_superoperator(maps[float(t)], rho0)
                    zp, zm = counterexample_eigenvalues(mu, alpha, t, rate)
                    eig2 = np.linalg.eigvalsh(second)
                    eig_res = float(np.max(np.abs(eig2 - np.array([zm, zm, zp, zp]))))
                    rho_min = float(np.linalg.eigvalsh(0.5 * (numeric + numeric.conj().T))[0])
                    entries.append(
                        {
                            "mu": float(mu), "alpha": float(alpha), "varphi": float(varphi), "t": float(t),
                            "state_residual": float(np.max(np.abs(closed - numeric))),
                            "eigen_residual": eig_res,
                            "z_plus": zp, "z_minus": zm,
                            "min_eig_second_term": float(eig2[0]),
                            "min_eig_state": rho_min,
                        }
                    )
    rep = CounterexampleReport(
        rate=rate,
        entries=entries,
        max_state_residual=max(e["state_residual"] for e in entries),
        max_eigen_residual=max(e["eigen_residual"] for e in entries),
        min_z=min(min(e["z_minus"], e["min_eig_second_term"]) for e in entries),
        min_state_eigenvalue=min(e["min_eig_state"] for e in entries),
    )
    if refine:
        rep.refined_min_z = min_z_over_domain(rate=rate)[0]
    rep.checks = {
        "closed_form_matches_numeric": rep.max_state_residual <= 1e-9,
        "second_term_eigenvalues_match": rep.max_eigen_residual <= 1e-9,
        "z_nonnegative": rep.min_z >= -1e-12 and (rep.refined_min_z is None or rep.refined_min_z >= -1e-12),
        "state_positive": rep.min_state_eigenvalue >= -TOL.positivity,
    }
    return rep


def min_z_over_domain(rate: float = REFERENCE_RATE, points: int = 10_000, starts: int = 10, t_max: float = 5.0):
    """Minimum of ``z_minus`` over mu in [0,1], alpha in [0, 2pi), t in [0, t_max].

    A ~``points`` grid followed by bounded local minimisation from the lowest
    ``starts`` grid points. Returns ``(min_value, (mu, alpha, t))``.
    """
    k = max(2, round(points ** (1 / 3)))
    mus = np.linspace(0, 1, k)
    alphas = np.linspace(0, 2 * math.pi, k, endpoint=False)
    ts = np.linspace(0, t_max, k)
    mu_g, al_g, t_g = np.meshgrid(mus, alphas, ts, indexing="ij")
    a = np.exp(-rate * t_g)
    q = np.sin(al_g) ** 2 * (1 - 2 * mu_g) ** 2
    zm = 0.25 * (1 - a) * (1 - np.sqrt(a**2 + q * (1 - a**2)))
    flat = np.argsort(zm, axis=None)[:starts]
    best = (float(zm.min()), tuple(float(x[np.unravel_index(flat[0], zm.shape)]) for x in (mu_g, al_g, t_g)))

    def fz(p):
        return counterexample_eigenvalues(float(p[0]), float(p[1]), float(p[2]), rate)[1]

    bounds = [(0, 1), (0, 2 * math.pi), (0, t_max)]
    for idx in flat:
        ix = np.unravel_index(idx, zm.shape)
        x0 = np.array([mu_g[ix], al_g[ix], t_g[ix]])
        res = minimize(fz, x0, method="L-BFGS-B", bounds=bounds)
        if res.fun < best[0]:
            best = (float(res.fun), tuple(float(v) for v in res.x))
    return best


def z_curve(mu: float, alpha: float, times: Sequence[float], rate: float = REFERENCE_RATE, varphi: float = 0.0) -> list[tuple]:
    """Rows ``(t, z_plus, z_minus, min_eig_numeric)``; the last column is the smallest
    eigenvalue of (numerically evolved state - exp(-rate t) rho)."""
    from .models import counterexample_generators

    g1, g2 = counterexample_generators(rate)
    lsum = tensor_sum_generator(g1, g2)
    state = SchmidtState.from_angles(mu, alpha, varphi)
    rho0 = state.projector()
    rows = []
    for t in times:
        zp, zm = counterexample_eigenvalues(mu, alpha, t, rate)
        num = apply_superoperator(evolution_map(lsum, t), rho0) - math.exp(-rate * t) * rho0
        rows.append((float(t), zp, zm, float(np.linalg.eigvalsh(0.5 * (num + num.conj().T))[0])))
    return rows
