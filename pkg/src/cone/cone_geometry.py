# src/cone/cone_geometry.py
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg as sla

from src.config.settings import RANGE_TOL, RANK_TOL
from src.linalg.decompositions import eig_hermitian, range_basis, rank_tol
from src.states.quantum_states import MixedState, PureState
from src.states.state_operations import kron_all, partial_trace
from src.utils.errors import DegenerateRayError, FaceError, InputShapeError, NotPSDError
from src.utils.performance_decorator import track_performance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FaceInfo:
    """
    Smallest face of the PSD cone containing a state

    product holds orthonormal bases (S1, S2) of the marginal ranges when the face is
    the product face of S1 (x) S2, and is None otherwise.
    """
    rank: int
    range_basis: np.ndarray
    product: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @property
    def is_product(self) -> bool:
        return self.product is not None

    @property
    def local_ranks(self) -> Optional[Tuple[int, int]]:
        if self.product is None:
            return None
        return self.product[0].shape[1], self.product[1].shape[1]


@dataclass(frozen=True)
class ConeDecomposition:
    """rho = (1 - lam) C + lam E with E on the boundary of the face and lam = 1 / mu_star"""
    C: MixedState
    E: MixedState
    lam: float
    mu_star: float

    def reconstruct(self) -> np.ndarray:
        return (1 - self.lam) * self.C.matrix + self.lam * self.E.matrix

    def residual(self, rho: MixedState) -> float:
        return float(np.linalg.norm(self.reconstruct() - rho.matrix))


@dataclass
class CentreSearchResult:
    """Outcome of a random search for a centre minimizing rank(E)"""
    best_rank: int
    best_centre: Optional[MixedState]
    best_decomposition: Optional[ConeDecomposition]
    history: List[int] = field(default_factory=list)


def face_of(rho: MixedState, tol: float = RANK_TOL) -> FaceInfo:
    """
    Range of rho and, for bipartite states, product-face detection

    The face is a product face iff rank(rho) = rank(tr_2 rho) * rank(tr_1 rho); the
    marginal ranges then span it.

    Raises:
    -------
    NotPSDError : rho has an eigenvalue below -tol * lambda_max
    """
    eig = eig_hermitian(rho.matrix)
    scale = max(abs(eig.eigenvalues[-1]), abs(eig.eigenvalues[0]))
    if eig.eigenvalues[0] < -tol * scale:
        raise NotPSDError(f"state is indefinite (min eigenvalue {eig.eigenvalues[0]:.3e})")

    basis = range_basis(rho.matrix, tol)
    rank = basis.shape[1]
    if not rho.dims.is_bipartite():
        return FaceInfo(rank=rank, range_basis=basis)

    S1 = range_basis(partial_trace(rho, keep=(0,)), tol)
    S2 = range_basis(partial_trace(rho, keep=(1,)), tol)
    product = (S1, S2) if rank == S1.shape[1] * S2.shape[1] else None
    logger.debug("face rank %d, marginal ranks (%d, %d), product=%s",
                 rank, S1.shape[1], S2.shape[1], product is not None)
    return FaceInfo(rank=rank, range_basis=basis, product=product)


def default_centre(face: FaceInfo, dims) -> MixedState:
    """Maximally mixed product state P1/r1 (x) P2/r2 on a product face"""
    if face.product is None:
        raise FaceError("default centre requires a product face")
    S1, S2 = face.product
    P1 = S1 @ S1.conj().T / S1.shape[1]
    P2 = S2 @ S2.conj().T / S2.shape[1]
    return MixedState(dims, np.kron(P1, P2))


def _same_range(Q1: np.ndarray, Q2: np.ndarray, range_tol: float) -> bool:
    if Q1.shape[1] != Q2.shape[1]:
        return False
    residual = np.linalg.norm(Q1 @ Q1.conj().T - Q2 @ Q2.conj().T)
    return residual < range_tol


def ray_to_boundary(rho: MixedState, C: MixedState, tol: float = RANK_TOL,
                    range_tol: float = RANGE_TOL) -> Tuple[float, MixedState]:
    """
    Extend the ray from C through rho to the boundary of their common face

    Parameters:
    -----------
    rho : MixedState
    C : MixedState
        Centre with the same range as rho
    tol : float
        Rank tolerance for the range bases
    range_tol : float
        Maximum Frobenius distance between the two range projectors

    Returns:
    --------
    (float, MixedState) : mu_star > 1 and the unit-trace boundary state
                          E = (1 - mu_star) C + mu_star rho
    """
    if rho.dims != C.dims:
        raise InputShapeError(f"dims differ: {rho.dims.dims} vs {C.dims.dims}")
    if np.linalg.norm(rho.matrix - C.matrix) <= tol:
        raise DegenerateRayError("state coincides with the centre; the ray is undefined")

    Q = range_basis(rho.matrix, tol)
    if not _same_range(Q, range_basis(C.matrix, tol), range_tol):
        raise FaceError("state and centre do not span the same face")

    rho_r = Q.conj().T @ rho.matrix @ Q
    C_r = Q.conj().T @ C.matrix @ Q
    L = sla.cholesky((C_r + C_r.conj().T) / 2, lower=True)
    Y = sla.solve_triangular(L, rho_r, lower=True)
    X = sla.solve_triangular(L, Y.conj().T, lower=True)
    min_eigenvalue = sla.eigvalsh((X + X.conj().T) / 2)[0]
    assert min_eigenvalue < 1.0, "distinct unit-trace states cannot dominate each other"

    mu_star = 1.0 / (1.0 - min_eigenvalue)

    # rounding in E_r grows like mu_star, so the zero cut scales with it
    E_r = (1 - mu_star) * C_r + mu_star * rho_r
    w, V = sla.eigh((E_r + E_r.conj().T) / 2)
    floor = tol * mu_star * max(w[-1], 0.0)
    E_r = (V * np.where(w > floor, w, 0.0)) @ V.conj().T
    E = Q @ E_r @ Q.conj().T
    E = E / np.trace(E).real

    logger.debug("ray to boundary: mu*=%.12f, rank %d -> %d",
                 mu_star, Q.shape[1], rank_tol(E, tol))
    return float(mu_star), MixedState(rho.dims, E)


@track_performance("cone_decomposition")
def decompose(rho: MixedState, C: MixedState, tol: float = RANK_TOL,
              range_tol: float = RANGE_TOL) -> ConeDecomposition:
    """rho = (1 - lam) C + lam E with lam = 1 / mu_star"""
    mu_star, E = ray_to_boundary(rho, C, tol=tol, range_tol=range_tol)
    return ConeDecomposition(C=C, E=E, lam=1.0 / mu_star, mu_star=mu_star)


def spectral_ensemble(E: MixedState, tol: float = RANK_TOL) -> List[Tuple[float, PureState]]:
    """
    Eigen-ensemble of E with vanishing eigenvalues dropped, dominant terms first

    Weights are renormalized to sum to one.
    """
    eig = eig_hermitian(E.matrix)
    w, V = eig.eigenvalues[::-1], eig.eigenvectors[:, ::-1]
    keep = w > tol * w[0]
    weights = w[keep] / np.sum(w[keep])
    return [
        (float(weight), PureState.from_vector(V[:, k], E.dims))
        for weight, k in zip(weights, np.flatnonzero(keep))
    ]


def _random_face_marginal(S: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    r = S.shape[1]
    G = rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))
    M = S @ (G @ G.conj().T) @ S.conj().T
    return M / np.trace(M).real


def search_rank_one_centre(rho: MixedState, trials: int, rng: np.random.Generator,
                           tol: float = RANK_TOL) -> CentreSearchResult:
    """
    Random search over full-rank product centres on the face of rho for a small rank(E)

    Explores whether some centre makes the boundary state pure; a miss proves nothing.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    face = face_of(rho, tol)
    if face.product is None:
        raise FaceError("centre search requires a state on a product face")

    S1, S2 = face.product
    result = CentreSearchResult(best_rank=face.rank + 1, best_centre=None, best_decomposition=None)
    for trial in range(trials):
        centre = MixedState(rho.dims, kron_all([_random_face_marginal(S1, rng),
                                                _random_face_marginal(S2, rng)]))
        try:
            decomposition = decompose(rho, centre, tol=tol)
        except (FaceError, DegenerateRayError) as exc:
            logger.debug("trial %d skipped: %s", trial, exc)
            continue
        rank = rank_tol(decomposition.E.matrix, tol)
        result.history.append(rank)
        if rank < result.best_rank:
            result.best_rank = rank
            result.best_centre = centre
            result.best_decomposition = decomposition
        if rank == 1:
            break

    logger.info("centre search: best rank(E) = %d after %d trials",
                result.best_rank, len(result.history))
    return result
