import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dicke_critic import qops
from dicke_critic.errors import (
    DimensionMismatchError,
    InvalidModelError,
    UnknownOperatorError,
)

from conftest import random_density_matrix


def test_pauli_commutator():
    # [sx, sy] = i sz in the spin-1/2 normalization
    lhs = qops.commutator(qops.sigma("x"), qops.sigma("y"))
    assert np.allclose(lhs, 1j * qops.sigma("z"), atol=1e-15)


def test_pauli_squares_to_quarter_identity():
    sx = qops.sigma("x")
    assert np.allclose(sx @ sx, 0.25 * np.eye(2), atol=1e-15)


def test_raising_lowering_adjoint():
    assert np.array_equal(qops.sigma("plus"), qops.sigma("minus").conj().T)
    assert np.array_equal(qops.sigma("plus"), np.array([[0, 1], [0, 0]], dtype=complex))


def test_sz_commutator_with_raising():
    # [sz, s+] = s+
    lhs = qops.commutator(qops.sigma("z"), qops.sigma("plus"))
    assert np.allclose(lhs, qops.sigma("plus"), atol=1e-15)


def test_self_commutator_vanishes(rng):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.allclose(qops.commutator(a, a), 0.0, atol=1e-15)


def test_unknown_label_raises():
    with pytest.raises(UnknownOperatorError):
        qops.sigma("w")


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        qops.commutator(np.eye(2), np.eye(3))


def test_vectorization_is_column_stacking():
    rho = np.array([[1, 2], [3, 4]], dtype=complex)
    assert np.array_equal(qops.vectorize(rho), np.array([1, 3, 2, 4], dtype=complex))


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_vectorization_round_trip(seed):
    rng = np.random.default_rng(seed)
    rho = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    assert np.array_equal(qops.devectorize(qops.vectorize(rho)), rho)


def test_generator_rejects_non_hermitian_hamiltonian():
    with pytest.raises(InvalidModelError):
        qops.lindblad_generator(np.array([[0, 1], [0, 0]], dtype=complex), [])


def test_generator_rejects_negative_rate():
    with pytest.raises(InvalidModelError):
        qops.LindbladChannel(qops.sigma("z"), -0.1)


def test_bare_precession_spectrum():
    # eigenvalues {0, 0, +i wz, -i wz} for h = wz sz and no channels
    wz = 1.3
    gen = qops.lindblad_generator(wz * qops.sigma("z"), [])
    vals = np.sort_complex(np.linalg.eigvals(gen))
    expected = np.sort_complex(np.array([0, 0, 1j * wz, -1j * wz]))
    assert np.allclose(vals, expected, atol=1e-12)


def test_dephasing_coherence_eigenvalues():
    # coherences decay at exactly gamma in the doubled convention
    wz, gphi = 1.0, 0.4
    gen = qops.lindblad_generator(
        wz * qops.sigma("z"), [qops.LindbladChannel(qops.sigma("z"), gphi)]
    )
    vals = np.linalg.eigvals(gen)
    coh = sorted(v for v in vals if abs(v.imag) > 1e-10)
    assert np.allclose(coh, [-gphi - 1j * wz, -gphi + 1j * wz], atol=1e-12)


def test_sx_noise_channel_conserves_sx():
    # L = s- + s+ (t=1) with no Hamiltonian annihilates vec(sx)
    op = qops.sigma("minus") + qops.sigma("plus")
    gen = qops.lindblad_generator(np.zeros((2, 2), dtype=complex), [qops.LindbladChannel(op, 0.7)])
    image = gen @ qops.vectorize(qops.sigma("x"))
    assert np.max(np.abs(image)) < 1e-14


@pytest.mark.parametrize("bath_channels", [
    [],
    [("z", 0.4)],
    [("minus", 0.25), ("plus", 0.1)],
])
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=34, deadline=None)
def test_generator_annihilates_trace(bath_channels, seed):
    rng = np.random.default_rng(seed)
    gen = qops.lindblad_generator(
        qops.sigma("z"), [qops.LindbladChannel(qops.sigma(l), r) for l, r in bath_channels]
    )
    rho = random_density_matrix(rng)
    assert abs(np.trace(qops.devectorize(gen @ qops.vectorize(rho)))) < 1e-12
    assert qops.trace_preservation_defect(gen) < 1e-10


@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_generator_preserves_hermiticity(seed):
    rng = np.random.default_rng(seed)
    op = qops.sigma("minus") + 0.3 * qops.sigma("plus")
    gen = qops.lindblad_generator(1.1 * qops.sigma("z"), [qops.LindbladChannel(op, 0.2)])
    rho = random_density_matrix(rng)
    image = qops.devectorize(gen @ qops.vectorize(rho))
    assert np.max(np.abs(image - image.conj().T)) < 1e-12


@given(
    seed=st.integers(min_value=0, max_value=2**32 - 1),
    t=st.floats(min_value=0.0, max_value=10.0),
)
@settings(max_examples=20, deadline=None)
def test_evolution_preserves_positivity(seed, t):
    import scipy.linalg

    rng = np.random.default_rng(seed)
    gen = qops.lindblad_generator(
        qops.sigma("z"),
        [qops.LindbladChannel(qops.sigma("minus"), 0.3),
         qops.LindbladChannel(qops.sigma("z"), 0.1)],
    )
    rho = random_density_matrix(rng)
    evolved = qops.devectorize(scipy.linalg.expm(gen * t) @ qops.vectorize(rho))
    assert np.min(np.linalg.eigvalsh(0.5 * (evolved + evolved.conj().T))) > -1e-9


def test_unique_steady_state_spectrum():
    # exactly one eigenvalue at zero when a polarizing channel is present
    gen = qops.lindblad_generator(
        qops.sigma("z"), [qops.LindbladChannel(qops.sigma("minus"), 0.2)]
    )
    vals, vecs = qops.null_space(gen)
    assert vecs.shape[1] == 1


def test_density_matrix_validation():
    qops.validate_density_matrix(np.diag([0.25, 0.75]).astype(complex))
    with pytest.raises(InvalidModelError):
        qops.validate_density_matrix(np.diag([0.5, 0.6]).astype(complex))
    with pytest.raises(InvalidModelError):
        qops.validate_density_matrix(np.array([[1.2, 0], [0, -0.2]], dtype=complex))


def test_predicates():
    assert qops.is_hermitian(qops.sigma("x"))
    assert not qops.is_hermitian(qops.sigma("plus"))
    assert qops.is_unitary(np.eye(2, dtype=complex))
    assert qops.is_positive_semidefinite(np.diag([0.3, 0.7]).astype(complex))
    assert not qops.is_positive_semidefinite(np.diag([1.3, -0.3]).astype(complex))
