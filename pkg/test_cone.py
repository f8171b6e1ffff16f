# test_cone.py
"""
Face detection and cone decomposition along the ray from a centre
"""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from src.cone import (decompose, default_centre, face_of, ray_to_boundary, search_rank_one_centre,
                      spectral_ensemble)
from src.linalg import rank_tol
from src.states import DemoStates, MixedState, random_density_matrix, random_psd, random_pure_state
from src.utils.errors import DegenerateRayError, FaceError

MAXIMALLY_MIXED = MixedState((2, 2), np.eye(4) / 4)


def _boundary_state(rng, N, rank):
    return MixedState((int(np.sqrt(N)),) * 2, random_psd(N, rng, rank=rank))


def test_face_full_rank_is_product(rng):
    face = face_of(random_density_matrix((2, 2), rng))
    assert face.rank == 4
    assert face.local_ranks == (2, 2)


def test_face_of_bell_is_not_product():
    face = face_of(DemoStates.bell().to_mixed())
    assert face.rank == 1 and face.product is None


def test_face_inside_larger_space(rng):
    block = random_psd(4, rng)
    embed = np.zeros((9, 4))
    for column, (i, j) in enumerate([(0, 0), (0, 1), (1, 0), (1, 1)]):
        embed[3 * i + j, column] = 1.0
    rho = MixedState((3, 3), embed @ block @ embed.T)
    face = face_of(rho)
    assert face.rank == 4
    S1, S2 = face.product
    projector = S1 @ S1.conj().T
    assert_allclose(projector, np.diag([1.0, 1.0, 0.0]), atol=1e-10)
    assert_allclose(S2 @ S2.conj().T, np.diag([1.0, 1.0, 0.0]), atol=1e-10)


def test_default_centre_is_maximally_mixed_on_face(rng):
    rho = random_density_matrix((2, 3), rng)
    centre = default_centre(face_of(rho), rho.dims)
    assert_allclose(centre.matrix, np.eye(6) / 6, atol=1e-12)
    with pytest.raises(FaceError):
        default_centre(face_of(DemoStates.bell().to_mixed()), (2, 2))


def test_ray_isotropic_hits_bell():
    mu_star, E = ray_to_boundary(DemoStates.isotropic(0.2), MAXIMALLY_MIXED)
    assert np.isclose(mu_star, 5.0)
    assert_allclose(E.matrix, DemoStates.bell().projector(), atol=1e-10)


@pytest.mark.parametrize("lam", [0.2, 0.7])
def test_decompose_isotropic(lam):
    result = decompose(DemoStates.isotropic(lam), MAXIMALLY_MIXED)
    assert np.isclose(result.lam, lam)
    assert np.isclose(result.lam * result.mu_star, 1.0)
    assert_allclose(result.E.matrix, DemoStates.bell().projector(), atol=1e-9)


def test_decompose_half_mixture_round_trip(rng):
    C = random_density_matrix((3, 3), rng)
    E0 = _boundary_state(rng, 9, 4)
    rho = MixedState((3, 3), 0.5 * C.matrix + 0.5 * E0.matrix)
    result = decompose(rho, C)
    assert np.isclose(result.lam, 0.5, atol=1e-9)
    assert np.linalg.norm(result.E.matrix - E0.matrix) < 1e-8


def test_decompose_round_trip_batch(rng):
    for _ in range(100):
        C = random_density_matrix((3, 3), rng)
        E0 = _boundary_state(rng, 9, int(rng.integers(1, 9)))
        lam = float(rng.uniform(0.05, 0.95))
        rho = MixedState((3, 3), (1 - lam) * C.matrix + lam * E0.matrix)
        result = decompose(rho, C)
        assert abs(result.lam - lam) < 1e-9
        assert np.linalg.norm(result.E.matrix - E0.matrix) < 1e-8
        assert result.residual(rho) < 1e-9
        assert rank_tol(result.E.matrix) < rank_tol(rho.matrix)


@pytest.mark.parametrize("lam", [1e-3, 1e-4])
def test_small_weight_keeps_pure_boundary(rng, lam):
    for _ in range(100):
        C = MixedState((2, 2), np.kron(random_psd(2, rng), random_psd(2, rng)))
        z = random_pure_state((2, 2), rng)
        rho = MixedState((2, 2), (1 - lam) * C.matrix + lam * z.projector())
        result = decompose(rho, C)
        assert np.isclose(result.lam, lam, rtol=1e-6)
        ensemble = spectral_ensemble(result.E)
        assert len(ensemble) == 1
        assert np.isclose(abs(np.vdot(ensemble[0][1].amplitudes, z.amplitudes)), 1.0, atol=1e-6)


def test_segment_stays_psd_up_to_boundary(rng):
    C = random_density_matrix((3, 3), rng)
    rho = random_density_matrix((3, 3), rng)
    result = decompose(rho, C)
    assert 0 < result.lam < 1
    assert result.residual(rho) < 1e-9
    assert rank_tol(result.E.matrix) <= 8
    for mu in np.linspace(1.0, result.mu_star, 10):
        segment = (1 - mu) * C.matrix + mu * rho.matrix
        assert np.linalg.eigvalsh(segment)[0] > -1e-10


def test_ray_errors(rng):
    C = random_density_matrix((2, 2), rng)
    with pytest.raises(DegenerateRayError):
        ray_to_boundary(C, C)
    with pytest.raises(FaceError):
        ray_to_boundary(DemoStates.harmonic_gap_boundary(), MAXIMALLY_MIXED)


def test_spectral_ensemble_examples(rng):
    single = spectral_ensemble(DemoStates.bell().to_mixed())
    assert len(single) == 1
    weight, vector = single[0]
    assert np.isclose(weight, 1.0)
    assert np.isclose(abs(np.vdot(vector.amplitudes, DemoStates.bell().amplitudes)), 1.0)

    gap = spectral_ensemble(DemoStates.harmonic_gap_boundary())
    assert_allclose([w for w, _ in gap], [0.5, 0.5], atol=1e-12)

    rank3 = spectral_ensemble(_boundary_state(rng, 9, 3))
    assert len(rank3) == 3
    assert np.isclose(sum(w for w, _ in rank3), 1.0)


def test_product_detection_on_face_supported_mixtures(rng):
    for _ in range(20):
        S1 = np.linalg.qr(rng.standard_normal((3, 2)))[0]
        S2 = np.linalg.qr(rng.standard_normal((3, 2)))[0]
        basis = np.kron(S1, S2)
        rho = MixedState((3, 3), basis @ random_psd(4, rng) @ basis.conj().T)
        assert face_of(rho).product is not None

        vector = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        vector /= np.linalg.norm(vector)
        assert face_of(MixedState((3, 3), np.outer(vector, vector.conj()))).product is None


def test_centre_search_reports_history(rng):
    rho = random_density_matrix((2, 2), rng)
    result = search_rank_one_centre(rho, trials=5, rng=rng)
    assert 1 <= len(result.history) <= 5
    assert result.best_rank == min(result.history)
    assert result.best_decomposition.residual(rho) < 1e-9
