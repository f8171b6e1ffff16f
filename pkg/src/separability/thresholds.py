# src/separability/thresholds.py
import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from src.config.settings import (DECISION_TOL, PPT_BISECTION_TOL, PPT_MAX_ITER, PSD_TOL,
                                 RANGE_TOL, RANK_TOL)
from src.cone.cone_geometry import decompose, default_centre, face_of, spectral_ensemble
from src.linalg.decompositions import orthogonal_complementation, psd_factor
from src.states.quantum_states import MixedState, PureState, SchmidtSpectrum
from src.states.state_operations import (coefficient_matrix, generalized_spectrum, is_ppt,
                                         min_pt_eigenvalue)
from src.utils.errors import FaceError, InputShapeError, NotPSDError, SeparabilityError
from src.utils.performance_decorator import track_performance

logger = logging.getLogger(__name__)


class SeparabilityStatus(str, Enum):
    SEPARABLE = "separable"
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    """
    Separability certificate together with the thresholds that produced it
    """
    status: SeparabilityStatus
    lam: Optional[float]
    lambda_star: Optional[float]
    lambda_bar: Optional[float]
    ppt: bool
    criterion: str
    min_pt_eigenvalue: float = 0.0
    K: Optional[int] = None
    reason: Optional[str] = None

    def to_dict(self) -> dict:
        record = asdict(self)
        record["status"] = self.status.value
        return record


@dataclass(frozen=True)
class LocalFrame:
    """
    Complemented local factors of M1, M2 and the coefficients of z in their frame

    coefficients is the N1 x N2 coefficient matrix of (F1bar (x) F2bar)^-1 z; c is its
    squared norm.
    """
    F1: np.ndarray
    F2: np.ndarray
    r1: int
    r2: int
    coefficients: np.ndarray
    c: float

    @property
    def block(self) -> np.ndarray:
        return self.coefficients[:self.r1, :self.r2]


@dataclass(frozen=True)
class ThresholdDetail:
    """lambda*(z) for a general product centre and the values it is built from"""
    lambda_star: float
    lambda_star_literal: float
    c: float
    r1: int
    r2: int
    sigma: SchmidtSpectrum


def _normalized_marginal(M, N: int, name: str) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.shape != (N, N):
        raise InputShapeError(f"{name} must be {N}x{N}, got {M.shape}")
    trace = np.trace(M).real
    if trace <= 0:
        raise NotPSDError(f"{name} has non-positive trace {trace:.3e}")
    return M / trace


def local_frame(z: PureState, M1, M2, tol: float = RANK_TOL,
                range_tol: float = RANGE_TOL) -> LocalFrame:
    """
    Express z in the frame of the orthogonal complementations of M1 and M2

    Raises:
    -------
    FaceError : z has support outside R(M1) (x) R(M2)
    """
    if not z.dims.is_bipartite():
        raise InputShapeError(f"need a bipartite state, got {z.dims.n} factors")
    N1, N2 = z.dims.dims
    M1 = _normalized_marginal(M1, N1, "M1")
    M2 = _normalized_marginal(M2, N2, "M2")

    thin1, thin2 = psd_factor(M1, tol), psd_factor(M2, tol)
    r1, r2 = thin1.shape[1], thin2.shape[1]
    F1 = orthogonal_complementation(thin1, tol)
    F2 = orthogonal_complementation(thin2, tol)

    W = sla.solve(F1, sla.solve(F2, coefficient_matrix(z).T).T)
    outside = W.copy()
    outside[:r1, :r2] = 0.0
    if np.linalg.norm(outside) > range_tol * np.linalg.norm(W):
        raise FaceError("state has support outside the product face of its marginals")

    return LocalFrame(F1=F1, F2=F2, r1=r1, r2=r2, coefficients=W,
                      c=float(np.linalg.norm(W) ** 2))


def remap_threshold(t: float, c: float, r1: int, r2: int) -> float:
    """Carry a transformed-frame threshold t back through lam' = lam c / ((1 - lam) r1 r2 + lam c)"""
    return t * r1 * r2 / (c * (1 - t) + t * r1 * r2)


def lambda_star_detail(z: PureState, M1, M2, tol: float = RANK_TOL) -> ThresholdDetail:
    """
    Threshold lambda*(z) for (1 - lam) M1 (x) M2 + lam |z><z|

    Parameters:
    -----------
    z : PureState
        Bipartite pure state inside R(M1) (x) R(M2)
    M1, M2 : array
        PSD marginals of the centre; trace-normalized internally
    tol : float
        Rank tolerance

    Returns:
    --------
    ThresholdDetail : remapped threshold, transformed-frame threshold, c, local ranks, sigma
    """
    frame = local_frame(z, M1, M2, tol)
    A = sla.inv(frame.F1 @ frame.F1.conj().T)
    B = sla.inv(frame.F2 @ frame.F2.conj().T)
    sigma = generalized_spectrum(coefficient_matrix(z), (A + A.conj().T) / 2,
                                 (B + B.conj().T) / 2, tol=tol)

    literal = 1.0 / (1.0 + frame.r1 * frame.r2 * sigma.product)
    remapped = remap_threshold(literal, frame.c, frame.r1, frame.r2)
    if abs(remapped - literal) > 1e-12:
        logger.debug("lambda* remapped %.12f differs from transformed-frame value %.12f (c=%.6f)",
                     remapped, literal, frame.c)
    return ThresholdDetail(lambda_star=remapped, lambda_star_literal=literal, c=frame.c,
                           r1=frame.r1, r2=frame.r2, sigma=sigma)


def lambda_star_pure(z: PureState, M1, M2, tol: float = RANK_TOL) -> float:
    """lambda*(z): (1 - lam) M1 (x) M2 + lam |z><z| is separable iff lam <= lambda*(z)"""
    return lambda_star_detail(z, M1, M2, tol).lambda_star


def lambda_bar(ensemble: Sequence[Tuple[float, PureState]], M1, M2, tol: float = RANK_TOL) -> float:
    """Harmonic combination 1 / sum_k e_k / lambda*(e_k) of per-vector thresholds"""
    if len(ensemble) == 0:
        raise ValueError("ensemble is empty")
    total = sum(weight / lambda_star_pure(vector, M1, M2, tol) for weight, vector in ensemble)
    return 1.0 / total


@track_performance("ppt_bisection")
def ppt_boundary(C: MixedState, E: MixedState, tol: float = PPT_BISECTION_TOL,
                 max_iter: int = PPT_MAX_ITER, psd_tol: float = PSD_TOL) -> float:
    """
    Largest lam in [0, 1] with (1 - lam) C + lam E PPT, by bisection

    Returns 1 when the whole segment is PPT and 0 when C itself is not.
    """
    if C.dims != E.dims:
        raise InputShapeError(f"dims differ: {C.dims.dims} vs {E.dims.dims}")

    def min_eigenvalue(lam: float) -> float:
        return min_pt_eigenvalue((1 - lam) * C.matrix + lam * E.matrix, C.dims)

    if min_eigenvalue(1.0) >= -psd_tol:
        return 1.0
    if min_eigenvalue(0.0) < -psd_tol:
        return 0.0

    lo, hi = 0.0, 1.0
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = (lo + hi) / 2
        if min_eigenvalue(mid) >= -psd_tol:
            lo = mid
        else:
            hi = mid
    return lo


def _inconclusive(lam: Optional[float], ppt: bool, min_eig: float, criterion: str, reason: str,
                  **extra) -> Verdict:
    logger.info("inconclusive (%s): %s", criterion, reason)
    return Verdict(status=SeparabilityStatus.INCONCLUSIVE, lam=lam, lambda_star=extra.get("lambda_star"),
                   lambda_bar=extra.get("lambda_bar"), ppt=ppt, criterion=criterion,
                   min_pt_eigenvalue=min_eig, K=extra.get("K"), reason=reason)


@track_performance("separability_check")
def check(rho: MixedState, centre_factors: Optional[Tuple[np.ndarray, np.ndarray]] = None,
          tol: float = RANK_TOL, psd_tol: float = PSD_TOL,
          range_tol: float = RANGE_TOL) -> Verdict:
    """
    Decide separability of a bipartite state by its cone decomposition

    face_of -> centre -> decompose -> spectral ensemble of E -> threshold rule.
    K = 1 decides exactly; K > 1 certifies below the harmonic threshold, detects
    entanglement only through PPT and is otherwise inconclusive.

    Parameters:
    -----------
    rho : MixedState
        Bipartite state
    centre_factors : (M1, M2), optional
        Use C = M1 (x) M2 instead of the maximally mixed state on the product face
    """
    if not rho.dims.is_bipartite():
        return _inconclusive(None, False, float("nan"), "input",
                             f"check needs a bipartite state, got {rho.dims.n} factors")

    ppt, min_eig = is_ppt(rho, psd_tol)
    lam = None

    try:
        face = face_of(rho, tol)
    except SeparabilityError as exc:
        return _inconclusive(lam, ppt, min_eig, "face", str(exc))
    if face.product is None:
        return _inconclusive(lam, ppt, min_eig, "no product face",
                             "support is not a product of the marginal ranges")

    if centre_factors is None:
        C = default_centre(face, rho.dims)
        S1, S2 = face.product
        M1, M2 = S1 @ S1.conj().T, S2 @ S2.conj().T
    else:
        N1, N2 = rho.dims.dims
        try:
            M1 = _normalized_marginal(centre_factors[0], N1, "M1")
            M2 = _normalized_marginal(centre_factors[1], N2, "M2")
            C = MixedState(rho.dims, np.kron(M1, M2))
        except SeparabilityError as exc:
            return _inconclusive(lam, ppt, min_eig, "centre", str(exc))

    if np.linalg.norm(rho.matrix - C.matrix) <= tol:
        return _finalize(Verdict(status=SeparabilityStatus.SEPARABLE, lam=0.0, lambda_star=None,
                                 lambda_bar=None, ppt=ppt, criterion="product centre",
                                 min_pt_eigenvalue=min_eig))

    try:
        decomposition = decompose(rho, C, tol=tol, range_tol=range_tol)
        ensemble = spectral_ensemble(decomposition.E, tol)
        thresholds = [lambda_star_pure(vector, M1, M2, tol) for _, vector in ensemble]
    except SeparabilityError as exc:
        return _inconclusive(lam, ppt, min_eig, "decomposition", str(exc))

    lam = decomposition.lam
    K = len(ensemble)
    logger.info("decomposed: lambda=%.10f, K=%d", lam, K)

    if K == 1:
        lambda_star = thresholds[0]
        status = (SeparabilityStatus.SEPARABLE if lam <= lambda_star + DECISION_TOL
                  else SeparabilityStatus.ENTANGLED)
        verdict = Verdict(status=status, lam=lam, lambda_star=lambda_star, lambda_bar=lambda_star,
                          ppt=ppt, criterion="pure-boundary threshold (K=1)",
                          min_pt_eigenvalue=min_eig, K=K)
        return _finalize(verdict)

    bar = 1.0 / sum(weight / threshold for (weight, _), threshold in zip(ensemble, thresholds))
    if lam <= bar + DECISION_TOL:
        verdict = Verdict(status=SeparabilityStatus.SEPARABLE, lam=lam, lambda_star=None,
                          lambda_bar=bar, ppt=ppt, criterion=f"harmonic threshold (K={K})",
                          min_pt_eigenvalue=min_eig, K=K)
    elif not ppt:
        verdict = Verdict(status=SeparabilityStatus.ENTANGLED, lam=lam, lambda_star=None,
                          lambda_bar=bar, ppt=ppt, criterion="PPT",
                          min_pt_eigenvalue=min_eig, K=K)
    else:
        verdict = Verdict(status=SeparabilityStatus.INCONCLUSIVE, lam=lam, lambda_star=None,
                          lambda_bar=bar, ppt=ppt, criterion="harmonic gap",
                          min_pt_eigenvalue=min_eig, K=K,
                          reason="lambda exceeds the harmonic threshold but the state is PPT")
    return _finalize(verdict)


def _finalize(verdict: Verdict) -> Verdict:
    # a separable state is always PPT; a conflict means the tolerances disagree
    if verdict.status is SeparabilityStatus.SEPARABLE and not verdict.ppt:
        logger.warning("threshold rule %s passed but PPT fails (min eigenvalue %.3e)",
                       verdict.criterion, verdict.min_pt_eigenvalue)
        return Verdict(status=SeparabilityStatus.INCONCLUSIVE, lam=verdict.lam,
                       lambda_star=verdict.lambda_star, lambda_bar=verdict.lambda_bar,
                       ppt=False, criterion=verdict.criterion, min_pt_eigenvalue=verdict.min_pt_eigenvalue,
                       K=verdict.K, reason="threshold passed but partial transpose is not PSD")
    return verdict
