# test_states.py
"""
State model, reshapes, Schmidt spectra and partial transpose
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from conftest import ginibre
from src.states import (DemoStates, DimSpec, MixedState, PureState, SchmidtSpectrum,
                        bipartition_reshape, coefficient_matrix, complement, generalized_schmidt,
                        is_ppt, kron_all, partial_trace, partial_transpose, random_density_matrix,
                        random_pure_state, schmidt_coefficients)
from src.utils.errors import InputShapeError, InvalidStateError


def test_dimspec_validation():
    spec = DimSpec((2, 3))
    assert spec.total == 6 and spec.n == 2
    with pytest.raises(InputShapeError):
        DimSpec((4,))
    with pytest.raises(InputShapeError):
        DimSpec((2, 0))


def test_pure_state_requires_unit_norm():
    with pytest.raises(InvalidStateError):
        PureState(DimSpec((2, 2)), np.array([1, 0, 0, 1]))
    with pytest.raises(InputShapeError):
        PureState(DimSpec((2, 2)), np.array([1, 0, 0]))


def test_mixed_state_validation():
    with pytest.raises(InvalidStateError):
        MixedState((2, 2), np.eye(4))
    with pytest.raises(InvalidStateError):
        MixedState((2, 2), np.diag([0.75, 0.5, -0.25, 0.0]))
    with pytest.raises(InvalidStateError):
        MixedState((1, 2), np.array([[0.5, 0.5], [0.0, 0.5]]))


def test_spectrum_from_values():
    sigma = SchmidtSpectrum.from_values([1, 3, 2])
    assert_allclose(sigma.sigmas, np.array([3, 2, 1]) / np.sqrt(14))
    assert sigma.rank == 3
    single = SchmidtSpectrum.from_values([5.0, 0.0])
    assert single.rank == 1 and single.sigma1 == 0.0


def test_coefficient_matrix_examples(rng):
    assert_allclose(coefficient_matrix(DemoStates.bell()), np.eye(2) / np.sqrt(2))
    basis = coefficient_matrix(DemoStates.basis((2, 2), (0, 1)))
    assert basis[0, 1] == 1 and np.count_nonzero(basis) == 1
    z = random_pure_state((3, 4), rng)
    assert np.isclose(np.linalg.norm(coefficient_matrix(z)), 1.0)
    with pytest.raises(InputShapeError):
        coefficient_matrix(DemoStates.ghz(3))


def test_bipartition_reshape_examples(rng):
    ghz = bipartition_reshape(DemoStates.ghz(3), [0])
    assert ghz.shape == (2, 4)
    expected = np.zeros((2, 4))
    expected[0, 0] = expected[1, 3] = 1 / np.sqrt(2)
    assert_allclose(ghz, expected)

    product = DemoStates.product([ginibre(rng, 2, 1)[:, 0], ginibre(rng, 3, 1)[:, 0], ginibre(rng, 2, 1)[:, 0]])
    assert np.linalg.matrix_rank(bipartition_reshape(product, [0, 1]), tol=1e-10) == 1

    with pytest.raises(InputShapeError):
        bipartition_reshape(product, [])
    with pytest.raises(InputShapeError):
        bipartition_reshape(product, [0, 1, 2])


def test_schmidt_examples():
    assert_allclose(schmidt_coefficients(DemoStates.bell()).sigmas, [1 / np.sqrt(2)] * 2)
    w = schmidt_coefficients(DemoStates.w(3), [0])
    assert_allclose(w.sigmas, [np.sqrt(2 / 3), np.sqrt(1 / 3)])
    product = schmidt_coefficients(DemoStates.basis((2, 3), (1, 2)))
    assert product.rank == 1
    assert_allclose(product.sigmas, [1.0])


def test_cut_and_complement_share_spectrum(rng):
    for _ in range(100):
        n = int(rng.integers(2, 5))
        dims = tuple(int(d) for d in rng.integers(1, 4, size=n))
        if int(np.prod(dims)) < 2:
            continue
        z = random_pure_state(dims, rng)
        part = [0] + [i for i in range(1, n) if rng.random() < 0.5]
        if len(part) == n:
            part = part[:-1]
        left = np.linalg.svd(bipartition_reshape(z, part), compute_uv=False)
        right = np.linalg.svd(bipartition_reshape(z, complement(part, n)), compute_uv=False)
        k = min(left.size, right.size)
        assert_allclose(left[:k], right[:k], atol=1e-12)


def test_generalized_schmidt_identity_metrics(rng):
    z = random_pure_state((3, 4), rng)
    plain = schmidt_coefficients(z)
    general = generalized_schmidt(z, np.eye(3), np.eye(4))
    assert_allclose(general.sigmas, plain.sigmas, atol=1e-12)
    assert_allclose(generalized_schmidt(DemoStates.bell(), 2 * np.eye(2), 2 * np.eye(2)).sigmas,
                    [1 / np.sqrt(2)] * 2)


def test_generalized_schmidt_round_trip(rng):
    sigma = SchmidtSpectrum.from_values([3, 2, 1])
    F1, F2 = ginibre(rng, 3), ginibre(rng, 3)
    z = PureState.from_vector(np.kron(F1, F2) @ sigma.state_vector(3, 3), (3, 3))
    A = np.linalg.inv(F1 @ F1.conj().T)
    B = np.linalg.inv(F2 @ F2.conj().T)
    assert_allclose(generalized_schmidt(z, A, B).sigmas, sigma.sigmas, atol=1e-9)


def test_partial_transpose_examples():
    real_product = np.kron(np.array([[0.7, 0.2], [0.2, 0.3]]), np.array([[0.5, 0.1j], [-0.1j, 0.5]]))
    rho = MixedState((2, 2), real_product)
    assert_allclose(partial_transpose(rho, 1), real_product)

    bell = DemoStates.bell().to_mixed()
    assert_allclose(np.linalg.eigvalsh(partial_transpose(bell)), [-0.5, 0.5, 0.5, 0.5], atol=1e-12)

    lam = 0.6
    iso = DemoStates.isotropic(lam)
    assert np.isclose(np.linalg.eigvalsh(partial_transpose(iso))[0], (1 - lam) / 4 - lam / 2)


def test_partial_transpose_properties(rng):
    for _ in range(100):
        dims = tuple(int(d) for d in rng.integers(2, 4, size=2))
        rho = random_density_matrix(dims, rng)
        for factor in (1, 2):
            pt = partial_transpose(rho, factor)
            assert np.isclose(np.trace(pt), 1.0)
            assert_allclose(pt, pt.conj().T, atol=1e-14)
            assert_allclose(partial_transpose(pt, factor, dims=dims), rho.matrix, atol=1e-14)


def test_partial_transpose_needs_bipartite():
    with pytest.raises(InputShapeError):
        partial_transpose(DemoStates.ghz(3).to_mixed())


def test_partial_trace_of_product(rng):
    rho_a = random_density_matrix((2, 1), rng).matrix
    rho_b = random_density_matrix((3, 1), rng).matrix
    rho_c = random_density_matrix((2, 1), rng).matrix
    rho = kron_all([rho_a, rho_b, rho_c])
    dims = (2, 3, 2)
    assert_allclose(partial_trace(rho, [0], dims=dims), rho_a, atol=1e-14)
    assert_allclose(partial_trace(rho, [1], dims=dims), rho_b, atol=1e-14)
    assert_allclose(partial_trace(rho, [0, 2], dims=dims), np.kron(rho_a, rho_c), atol=1e-14)


def test_is_ppt_examples(rng):
    product = MixedState((2, 3), np.kron(random_density_matrix((2, 1), rng).matrix,
                                         random_density_matrix((3, 1), rng).matrix))
    assert is_ppt(product)[0]
    ok, min_eig = is_ppt(DemoStates.bell().to_mixed())
    assert not ok and np.isclose(min_eig, -0.5)
    ok, min_eig = is_ppt(DemoStates.isotropic(1 / 3))
    assert ok and abs(min_eig) < 1e-12


def test_rank_one_iff_product_of_marginal_vectors(rng):
    a, b = ginibre(rng, 3, 1)[:, 0], ginibre(rng, 2, 1)[:, 0]
    z = DemoStates.product([a, b])
    assert schmidt_coefficients(z).rank == 1
    rho = z.to_mixed()
    u = np.linalg.eigh(partial_trace(rho, [0]))[1][:, -1]
    v = np.linalg.eigh(partial_trace(rho, [1]))[1][:, -1]
    overlap = abs(np.vdot(np.kron(u, v), z.amplitudes))
    assert np.isclose(overlap, 1.0, atol=1e-10)

    assert schmidt_coefficients(random_pure_state((3, 2), rng)).rank == 2


@settings(max_examples=50, deadline=None)
@given(values=st.lists(st.floats(0.01, 10.0), min_size=1, max_size=6))
def test_spectrum_invariants(values):
    sigma = SchmidtSpectrum.from_values(values)
    assert np.isclose(np.sum(sigma.sigmas ** 2), 1.0)
    assert np.all(np.diff(sigma.sigmas) <= 0)
    assert sigma.rank == len(values)
