# src/linalg/decompositions.py
import logging
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from src.config.settings import HERMITIAN_TOL, PD_TOL, RANK_TOL
from src.utils.errors import InputShapeError, MetricError, NotPSDError, RankDeficientError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HermitianEig:
    """Eigenvalues in nondecreasing order with orthonormal eigenvector columns"""
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T


@dataclass(frozen=True)
class GsvdResult:
    """
    M = left[:, :rank] @ diag(sigmas) @ right[:, :rank]^dagger

    left is A-unitary and right is B-unitary (plain unitary for an ordinary SVD).
    """
    left: np.ndarray
    sigmas: np.ndarray
    right: np.ndarray
    rank: int

    def reconstruct(self) -> np.ndarray:
        r = self.rank
        return (self.left[:, :r] * self.sigmas) @ self.right[:, :r].conj().T


def as_cmatrix(M, name: str = "matrix") -> np.ndarray:
    """Coerce to a finite, two-dimensional complex array"""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2 or 0 in arr.shape:
        raise InputShapeError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputShapeError(f"{name} contains NaN or Inf entries")
    return arr


def _require_hermitian(M: np.ndarray, name: str, error=InputShapeError) -> np.ndarray:
    if M.shape[0] != M.shape[1]:
        raise error(f"{name} must be square, got shape {M.shape}")
    norm = np.linalg.norm(M)
    if np.linalg.norm(M - M.conj().T) > HERMITIAN_TOL * norm:
        raise error(f"{name} is not Hermitian")
    return (M + M.conj().T) / 2


def eig_hermitian(M) -> HermitianEig:
    """
    Hermitian eigendecomposition with eigenvalues in ascending order

    Raises:
    -------
    InputShapeError : non-square or non-Hermitian input
    """
    H = _require_hermitian(as_cmatrix(M), "matrix")
    eigenvalues, eigenvectors = sla.eigh(H)
    return HermitianEig(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def svd(M, tol: float = RANK_TOL) -> GsvdResult:
    """
    Plain SVD with full unitary factors and singular values truncated at tol * sigma_max
    """
    M = as_cmatrix(M)
    U, s, Vh = sla.svd(M, full_matrices=True)
    rank = _count_above(s, tol)
    return GsvdResult(left=U, sigmas=s[:rank].copy(), right=Vh.conj().T, rank=rank)


def _count_above(s: np.ndarray, tol: float) -> int:
    if s.size == 0 or s[0] <= 0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def _metric_roots(metric: np.ndarray, name: str):
    """Return (metric^{1/2}, metric^{-1/2}) of a positive definite metric"""
    H = _require_hermitian(metric, name, error=MetricError)
    w, V = sla.eigh(H)
    if w[-1] <= 0 or w[0] <= PD_TOL * w[-1]:
        raise MetricError(f"{name} is not positive definite (min eigenvalue {w[0]:.3e})")
    root = (V * np.sqrt(w)) @ V.conj().T
    inv_root = (V / np.sqrt(w)) @ V.conj().T
    return root, inv_root


def gsvd(M, A, B, tol: float = RANK_TOL) -> GsvdResult:
    """
    Generalized SVD of M with respect to positive definite metrics (A, B)

    Computed as the SVD of A^{1/2} M B^{1/2}, back-transformed with A^{-1/2} and B^{-1/2}.

    Parameters:
    -----------
    M : array (m x n)
    A : array (m x m), Hermitian positive definite
    B : array (n x n), Hermitian positive definite
    tol : float
        Relative rank tolerance on the generalized singular values

    Returns:
    --------
    GsvdResult : left A-unitary, right B-unitary
    """
    M = as_cmatrix(M)
    A = as_cmatrix(A, "metric A")
    B = as_cmatrix(B, "metric B")
    rows, cols = M.shape
    if A.shape != (rows, rows):
        raise MetricError(f"metric A must be {rows}x{rows}, got {A.shape}")
    if B.shape != (cols, cols):
        raise MetricError(f"metric B must be {cols}x{cols}, got {B.shape}")

    A_root, A_inv_root = _metric_roots(A, "metric A")
    B_root, B_inv_root = _metric_roots(B, "metric B")

    inner = svd(A_root @ M @ B_root, tol=tol)
    return GsvdResult(
        left=A_inv_root @ inner.left,
        sigmas=inner.sigmas,
        right=B_inv_root @ inner.right,
        rank=inner.rank
    )


def psd_factor(M, tol: float = RANK_TOL) -> np.ndarray:
    """
    Thin factor F (N x r) with F F^dagger = M, columns ordered by decreasing eigenvalue

    Eigenvalues below tol * lambda_max are clamped to zero.

    Raises:
    -------
    NotPSDError : M has an eigenvalue below -tol * ||M||
    """
    eig = eig_hermitian(M)
    w, V = eig.eigenvalues[::-1], eig.eigenvectors[:, ::-1]
    scale = np.max(np.abs(w))
    if scale == 0:
        return np.zeros((V.shape[0], 0), dtype=complex)
    if w[-1] < -tol * scale:
        raise NotPSDError(f"matrix is indefinite (min eigenvalue {w[-1]:.3e})")

    keep = w > tol * w[0]
    return V[:, keep] * np.sqrt(w[keep])


def orthogonal_complementation(F, tol: float = RANK_TOL) -> np.ndarray:
    """
    Extend a full-column-rank N x r factor to an invertible N x N matrix

    The first r columns are F itself; the remaining N - r columns are an orthonormal
    basis of the orthogonal complement of R(F). F is returned unchanged when r = N.
    """
    F = np.asarray(F, dtype=complex)
    if F.ndim != 2:
        raise InputShapeError(f"factor must be 2-D, got shape {F.shape}")
    N, r = F.shape
    if r > N:
        raise InputShapeError(f"factor has more columns ({r}) than rows ({N})")
    if r == 0 or rank_tol(F, tol) != r:
        raise RankDeficientError(f"factor of shape {F.shape} is not of full column rank")
    if r == N:
        return F.copy()

    Q, _ = sla.qr(F, mode="full")
    return np.hstack([F, Q[:, r:]])


def rank_tol(M, tol: float = RANK_TOL) -> int:
    """Number of singular values above tol * sigma_max (0 for the zero matrix)"""
    M = as_cmatrix(M)
    return _count_above(sla.svdvals(M), tol)


def range_basis(M, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the range of a Hermitian PSD matrix, dominant directions first"""
    eig = eig_hermitian(M)
    w, V = eig.eigenvalues[::-1], eig.eigenvectors[:, ::-1]
    if w.size == 0 or w[0] <= 0:
        return np.zeros((V.shape[0], 0), dtype=complex)
    return V[:, w > tol * w[0]]
