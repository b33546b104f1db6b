import math

import numpy as np
import pytest

from lindpos.config import DEFAULT_TIME_GRID
from lindpos.dynamics import (
    DensityMatrix,
    NegativeTimeError,
    closed_form_elementary,
    evolution_map,
    evolve_state,
    from_coherence_vector,
    to_coherence_vector,
    trajectory,
    trajectory_csv,
    unitary_evolution,
)
from lindpos.generators import apply_superoperator, superoperator_matrix
from lindpos.models import random_generator
from lindpos.numerics import SIGMA

from conftest import I2, S1, S3, random_density


def test_evolution_map_identity_cases(rng, qubit_pair):
    assert np.array_equal(evolution_map(np.zeros((4, 4)), 3.0), np.eye(4))
    s = superoperator_matrix(qubit_pair[0])
    assert np.array_equal(evolution_map(s, 0.0), np.eye(4))
    with pytest.raises(NegativeTimeError):
        evolution_map(s, -0.1)


def test_depolarizing_map_damps_all_paulis(qubit_pair):
    m = evolution_map(superoperator_matrix(qubit_pair[0]), 0.3)
    for k in (1, 2, 3):
        out = m @ SIGMA[k].reshape(-1, order="F")
        assert np.allclose(out, math.exp(-1.2) * SIGMA[k].reshape(-1, order="F"), atol=1e-14)


def test_semigroup_law(qubit_pair, rng):
    for s in (superoperator_matrix(qubit_pair[1]), superoperator_matrix(random_generator(rng, 3))):
        lhs = evolution_map(s, 0.3) @ evolution_map(s, 0.7)
        assert np.max(np.abs(lhs - evolution_map(s, 1.0))) <= 1e-10


def test_evolve_state_basics(qubit_pair, rng):
    s1, s2 = (superoperator_matrix(g) for g in qubit_pair)
    rho = random_density(rng, 2)
    assert np.allclose(evolve_state(s1, rho, 0.0).matrix, rho, atol=1e-15)
    fixed = (I2 + S1) / 2
    for t in DEFAULT_TIME_GRID:
        assert np.allclose(evolve_state(s2, fixed, t).matrix, fixed, atol=1e-12)
    with pytest.raises(NegativeTimeError):
        evolve_state(s1, rho, -1.0)


def test_purity_decreases_to_half(qubit_pair, rng):
    s1 = superoperator_matrix(qubit_pair[0])
    psi = rng.normal(size=2) + 1j * rng.normal(size=2)
    rho0 = DensityMatrix.pure(psi)
    times = np.linspace(0, 5, 60)
    pur = [evolve_state(s1, rho0, t).purity for t in times]
    assert np.all(np.diff(pur) <= 1e-14)
    # closed form: purity = 1/2 + 2|r|^2 exp(-8t) with |r|^2 = 1/4 for pure states
    assert np.allclose(pur, 0.5 + 0.5 * np.exp(-8 * times), atol=1e-12)


def test_trace_and_hermiticity_preserved(rng):
    for n in (2, 3):
        for _ in range(5):
            s = superoperator_matrix(random_generator(rng, n, "cp"))
            rho = random_density(rng, n)
            for t in (0, 0.1, 1, 10):
                evolve_state(s, rho, t, known_positive=True)
                out = apply_superoperator(evolution_map(s, t), rho)
                assert abs(np.trace(out) - 1) <= 1e-12
                assert np.max(np.abs(out - out.conj().T)) <= 1e-12


def test_non_positive_output_is_kept_as_data():
    # transpose-like generator output: the evolved matrix may go negative; evolve_state must not project
    from lindpos.models import C_SIGMA2_ONLY
    from lindpos.generators import GeneratorSpec, tensor_sum_generator

    g = GeneratorSpec.from_kossakowski(2 * C_SIGMA2_ONLY)
    lsum = tensor_sum_generator(g, g)
    singlet = np.array([0, 1, -1, 0]) / math.sqrt(2)
    out = evolve_state(lsum, DensityMatrix.pure(singlet), 1.0)
    assert out.min_eigenvalue < -0.1
    with pytest.raises(ValueError):
        evolve_state(lsum, DensityMatrix.pure(singlet), 1.0, known_positive=True)


def test_unitary_evolution():
    rho0 = (I2 + S1) / 2
    out = unitary_evolution(S3, rho0, math.pi / 2)
    # oracle: exp(-i sigma_3 t) rotates sigma_1 about z by 2t
    t = math.pi / 2
    oracle = (I2 + math.cos(2 * t) * S1 + math.sin(2 * t) * SIGMA[2]) / 2
    assert np.allclose(out.matrix, oracle, atol=1e-14)
    assert np.allclose(out.matrix, (I2 - S1) / 2, atol=1e-14)
    assert np.allclose(unitary_evolution(np.zeros((2, 2)), rho0, 1.3).matrix, rho0)
    with pytest.raises(ValueError):
        unitary_evolution(np.array([[0, 1], [0, 0]]), rho0, 1.0)


def test_unitary_evolution_preserves_spectrum(rng):
    from conftest import random_herm

    h = random_herm(rng, 3)
    rho = random_density(rng, 3)
    ev0 = np.linalg.eigvalsh(rho)
    for t in (0.2, 1.0, 7.0):
        out = unitary_evolution(h, rho, t)
        assert np.allclose(np.linalg.eigvalsh(out.matrix), ev0, atol=1e-12)
        assert out.purity == pytest.approx(float(np.sum(ev0**2)), abs=1e-12)


def test_coherence_vectors(rng):
    assert np.allclose(to_coherence_vector(I2 / 2), [0.5, 0, 0, 0])
    assert np.allclose(to_coherence_vector((I2 + S3) / 2), [0.5, 0, 0, 0.5])
    for _ in range(20):
        psi = rng.normal(size=2) + 1j * rng.normal(size=2)
        v = to_coherence_vector(DensityMatrix.pure(psi))
        assert np.sum(v[1:] ** 2) == pytest.approx(0.25, abs=1e-14)
        rho = random_density(rng, 2)
        assert np.max(np.abs(from_coherence_vector(to_coherence_vector(rho)) - rho)) <= 1e-14
    with pytest.raises(ValueError):
        to_coherence_vector(np.eye(3) / 3)


def test_closed_form_elementary_values():
    v = np.array([0.5, 0.5, 0, 0])
    assert np.array_equal(closed_form_elementary(1, v, 0.0, 4.0), v)
    assert np.allclose(closed_form_elementary(1, v, 1.0, 4.0), [0.5, math.exp(-4) / 2, 0, 0])
    w = np.array([0.5, 0.1, 0.2, 0.3])
    assert np.allclose(closed_form_elementary(2, w, 1.0, 4.0), [0.5, 0.1, 0.2 * math.exp(-4), 0.3])


@pytest.mark.parametrize("which", [1, 2])
def test_closed_form_matches_numerical_evolution(qubit_pair, rng, which):
    s = superoperator_matrix(qubit_pair[which - 1])
    for _ in range(5):
        rho = random_density(rng, 2)
        v0 = to_coherence_vector(rho)
        for t in DEFAULT_TIME_GRID:
            num = to_coherence_vector(evolve_state(s, rho, t))
            assert np.max(np.abs(num - closed_form_elementary(which, v0, t, 4.0))) <= 1e-10


def test_qubit_determinant_criterion(rng):
    from lindpos.numerics import min_eigenvalue

    for _ in range(200):
        v = np.concatenate([[0.5], rng.uniform(-0.6, 0.6, size=3)])
        m = from_coherence_vector(v)
        assert (np.linalg.det(m).real >= -1e-12) == (min_eigenvalue(m) >= -1e-12)


def test_trajectory_export(qubit_pair):
    rows = trajectory(superoperator_matrix(qubit_pair[0]), (I2 + S3) / 2, (0.0, 1.0))
    text = trajectory_csv(rows)
    lines = text.strip().splitlines()
    assert lines[0].split(",")[:3] == ["t", "re_00", "im_00"]
    assert len(lines) == 3
    assert float(lines[1].split(",")[1]) == pytest.approx(1.0)
