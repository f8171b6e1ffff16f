# src/multipartite/genuine_entanglement.py
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy import linalg as sla

from src.config.settings import DECISION_TOL, MAX_TOTAL_DIM, RANGE_TOL, RANK_TOL
from src.linalg.decompositions import as_cmatrix, orthogonal_complementation, psd_factor, rank_tol
from src.states.quantum_states import PureState
from src.states.state_operations import (bipartition_reshape, complement, generalized_spectrum,
                                         kron_all, schmidt_coefficients)
from src.utils.errors import FaceError, InputShapeError, NotPSDError, SingularOperatorError
from src.utils.performance_decorator import check_memory_budget, track_performance

logger = logging.getLogger(__name__)

TIE_TOL = 1e-14
FAMILIES = ("W", "GHZ")


@dataclass(frozen=True)
class CutRecord:
    """Leading generalized Schmidt coefficients of z across subset | complement"""
    subset: Tuple[int, ...]
    sigma0: float
    sigma1: float
    rank: int

    @property
    def product(self) -> float:
        return self.sigma0 * self.sigma1


@dataclass(frozen=True)
class BipartitionScan:
    """
    Per-cut spectra over all canonical bipartitions and the genuine-entanglement threshold

    lambda_star = 1/(1 + prod(r_i) * min sigma0 sigma1); lambda_star_remapped carries it
    through the mixing-weight change of the local frame and equals lambda_star when every
    M_i is proportional to the identity.
    """
    cuts: Tuple[CutRecord, ...]
    min_cut: Tuple[int, ...]
    lambda_star: float
    lambda_star_remapped: float
    local_ranks: Tuple[int, ...]

    @property
    def min_product(self) -> float:
        return next(cut.product for cut in self.cuts if cut.subset == self.min_cut)


def canonical_bipartitions(n: int) -> List[Tuple[int, ...]]:
    """
    Nonempty proper subsets containing factor 0, sorted lexicographically

    Each unordered cut appears once; there are 2^(n-1) - 1 of them.
    """
    if n < 2:
        raise InputShapeError(f"need at least two factors, got {n}")
    rest = range(1, n)
    parts = [(0,) + combo for size in range(n - 1) for combo in combinations(rest, size)]
    return sorted(parts)


def _local_frames(z: PureState, M: Optional[Sequence], tol: float):
    """Complemented factors, metrics (F F^dagger)^-1 and local ranks of each marginal"""
    if M is None:
        M = [np.eye(N) / N for N in z.dims]
    if len(M) != z.dims.n:
        raise InputShapeError(f"need {z.dims.n} marginals, got {len(M)}")

    factors, metrics, ranks = [], [], []
    for index, (N, M_i) in enumerate(zip(z.dims, M)):
        M_i = as_cmatrix(M_i, f"M{index + 1}")
        if M_i.shape != (N, N):
            raise InputShapeError(f"M{index + 1} must be {N}x{N}, got {M_i.shape}")
        trace = np.trace(M_i).real
        if trace <= 0:
            raise NotPSDError(f"M{index + 1} has non-positive trace {trace:.3e}")
        thin = psd_factor(M_i / trace, tol)
        F = orthogonal_complementation(thin, tol)
        metric = sla.inv(F @ F.conj().T)
        factors.append(F)
        metrics.append((metric + metric.conj().T) / 2)
        ranks.append(thin.shape[1])
    return factors, metrics, tuple(ranks)


def apply_local(operators: Sequence[np.ndarray], z_tensor: np.ndarray) -> np.ndarray:
    """Apply one operator per tensor axis, (O_1 (x) ... (x) O_n) z, without forming the Kronecker product"""
    tensor = z_tensor
    for axis, operator in enumerate(operators):
        tensor = np.moveaxis(np.tensordot(operator, tensor, axes=(1, axis)), 0, axis)
    return tensor


def _evaluate_cut(z: PureState, part: Tuple[int, ...], metrics: Sequence[np.ndarray],
                  tol: float) -> CutRecord:
    rest = complement(part, z.dims.n)
    A = kron_all([metrics[i] for i in part])
    B = kron_all([metrics[j] for j in rest])
    sigma = generalized_spectrum(bipartition_reshape(z, part), A, B, tol=tol)
    return CutRecord(subset=part, sigma0=sigma.sigma0, sigma1=sigma.sigma1, rank=sigma.rank)


@track_performance("bipartition_scan")
def genuine_threshold(z: PureState, M: Optional[Sequence] = None, tol: float = RANK_TOL,
                      n_jobs: int = 1, max_total_dim: int = MAX_TOTAL_DIM) -> BipartitionScan:
    """
    Noise threshold above which (1 - lam) M_1 (x) ... (x) M_n + lam |z><z| is genuinely entangled

    Parameters:
    -----------
    z : PureState
        State on n >= 3 factors inside the product face of the marginals
    M : sequence of arrays, optional
        PSD marginals of the centre; default I/N_i
    tol : float
        Rank tolerance
    n_jobs : int
        joblib workers for the cut evaluations; results keep canonical cut order
    max_total_dim : int
        Dense dimension cap

    Returns:
    --------
    BipartitionScan : per-cut spectra, minimizing cut and thresholds
    """
    n = z.dims.n
    if n < 3:
        raise InputShapeError(f"genuine threshold needs n >= 3 factors, got {n}; use separability for bipartite states")
    check_memory_budget(z.dims.total, max_total_dim)

    factors, metrics, ranks = _local_frames(z, M, tol)
    w = apply_local([sla.inv(F) for F in factors], z.amplitudes.reshape(z.dims.dims))
    inside = w[tuple(slice(0, r) for r in ranks)]
    outside_norm = np.sqrt(max(np.linalg.norm(w) ** 2 - np.linalg.norm(inside) ** 2, 0.0))
    if outside_norm > RANGE_TOL * np.linalg.norm(w):
        raise FaceError("state has support outside the product face of its marginals")
    c = float(np.linalg.norm(w) ** 2)

    parts = canonical_bipartitions(n)
    cuts = Parallel(n_jobs=n_jobs)(
        delayed(_evaluate_cut)(z, part, metrics, tol) for part in parts
    )

    best = cuts[0]
    for cut in cuts[1:]:
        if cut.product < best.product - TIE_TOL:
            best = cut

    R = int(np.prod(ranks))
    lambda_star = 1.0 / (1.0 + R * best.product)
    remapped = lambda_star * R / (c * (1 - lambda_star) + lambda_star * R)
    if abs(remapped - lambda_star) > 1e-12:
        logger.info("genuine threshold %.12f differs from its frame-remapped value %.12f (c=%.6f)",
                    lambda_star, remapped, c)
    logger.debug("scanned %d cuts, minimizing cut %s", len(cuts), best.subset)

    return BipartitionScan(cuts=tuple(cuts), min_cut=best.subset, lambda_star=lambda_star,
                           lambda_star_remapped=remapped, local_ranks=ranks)


def check_genuine(lam: float, z: PureState, M: Optional[Sequence] = None,
                  tol: float = RANK_TOL, n_jobs: int = 1,
                  max_total_dim: int = MAX_TOTAL_DIM) -> bool:
    """True iff lam strictly exceeds the genuine-entanglement threshold of z (beyond rounding slack)"""
    scan = genuine_threshold(z, M, tol=tol, n_jobs=n_jobs, max_total_dim=max_total_dim)
    return lam > scan.lambda_star + DECISION_TOL


def family_threshold(family: str, n: int, d: int = 2) -> float:
    """
    Closed-form genuine-entanglement thresholds under white noise

    W_n (qubits): 1/(1 + 2^n sqrt(n - 1)/n); GHZ_n with local dimension d: 1/(1 + d^(n - 1))
    """
    name = family.upper().split("_")[0]
    if name not in FAMILIES:
        raise ValueError(f"Unknown family: {family}")
    if n < 3:
        raise ValueError(f"family thresholds need n >= 3, got {n}")
    if name == "W":
        if d != 2:
            raise ValueError(f"the W family is defined for qubits only, got d={d}")
        return 1.0 / (1.0 + 2 ** n * np.sqrt(n - 1) / n)
    if d < 2:
        raise ValueError(f"GHZ needs d >= 2, got {d}")
    return 1.0 / (1.0 + d ** (n - 1))


def g_of_n(states: Sequence[Tuple[int, PureState]], d: int,
           tol: float = RANK_TOL) -> List[float]:
    """d^n times the smallest plain sigma0 sigma1 over all cuts, for each (n, state)"""
    values = []
    for n, psi in states:
        if psi.dims.n != n:
            raise InputShapeError(f"state has {psi.dims.n} factors, expected {n}")
        smallest = min(schmidt_coefficients(psi, part, tol).product for part in canonical_bipartitions(n))
        values.append(float(d ** n * smallest))
    return values


def slocc_threshold(psi: PureState, G: Sequence, M: Optional[Sequence] = None,
                    tol: float = RANK_TOL, n_jobs: int = 1,
                    max_total_dim: int = MAX_TOTAL_DIM) -> BipartitionScan:
    """
    Genuine-entanglement threshold of z = G_1 (x) ... (x) G_n |psi> / norm

    Raises:
    -------
    SingularOperatorError : some G_i is not invertible
    """
    if len(G) != psi.dims.n:
        raise InputShapeError(f"need {psi.dims.n} local operators, got {len(G)}")
    operators = []
    for index, (N, G_i) in enumerate(zip(psi.dims, G)):
        G_i = as_cmatrix(G_i, f"G{index + 1}")
        if G_i.shape != (N, N):
            raise InputShapeError(f"G{index + 1} must be {N}x{N}, got {G_i.shape}")
        if rank_tol(G_i, tol) < N:
            raise SingularOperatorError(f"G{index + 1} is singular")
        operators.append(G_i)

    z = apply_local(operators, psi.amplitudes.reshape(psi.dims.dims)).reshape(-1)
    return genuine_threshold(PureState.from_vector(z, psi.dims), M, tol=tol,
                             n_jobs=n_jobs, max_total_dim=max_total_dim)
