# src/separability/werner_ensemble.py
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from src.config.settings import RANK_TOL
from src.separability.thresholds import local_frame, lambda_star_pure, remap_threshold
from src.states.quantum_states import PureState, SchmidtSpectrum
from src.utils.errors import InputShapeError, NoCertificateError

logger = logging.getLogger(__name__)

WEIGHT_FLOOR = 1e-15      # grid weights at or below this are dropped
NEGATIVE_SLACK = 1e-12    # rounding allowance on the diagonal slack
CERTIFY_SLACK = 1e-12


@dataclass(frozen=True)
class ProductTerm:
    """weight * |a><a| (x) |b><b| with unit vectors a, b"""
    weight: float
    a: np.ndarray
    b: np.ndarray

    def matrix(self) -> np.ndarray:
        return self.weight * np.kron(np.outer(self.a, self.a.conj()), np.outer(self.b, self.b.conj()))


@dataclass(frozen=True)
class ProductEnsemble:
    """Explicit separable decomposition sum_k w_k |a_k><a_k| (x) |b_k><b_k|"""
    terms: Tuple[ProductTerm, ...]
    dims: Tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        N1, N2 = self.dims
        for term in self.terms:
            if not term.weight > 0:
                raise ValueError(f"product term weights must be positive, got {term.weight}")
            if term.a.shape != (N1,) or term.b.shape != (N2,):
                raise InputShapeError(
                    f"term factors have shapes {term.a.shape}, {term.b.shape}, expected ({N1},), ({N2},)"
                )

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def total_weight(self) -> float:
        return float(sum(term.weight for term in self.terms))

    def matrix(self) -> np.ndarray:
        N = self.dims[0] * self.dims[1]
        total = np.zeros((N, N), dtype=complex)
        for term in self.terms:
            total += term.matrix()
        return total

    def residual(self, target: np.ndarray) -> float:
        return float(np.linalg.norm(self.matrix() - target))

    def scaled(self, factor: float) -> "ProductEnsemble":
        if factor <= 0:
            raise ValueError(f"scale factor must be positive, got {factor}")
        return ProductEnsemble(
            tuple(ProductTerm(term.weight * factor, term.a, term.b) for term in self.terms),
            self.dims
        )

    def merged(self, other: "ProductEnsemble") -> "ProductEnsemble":
        if tuple(other.dims) != tuple(self.dims):
            raise InputShapeError(f"cannot merge ensembles on {self.dims} and {other.dims}")
        return ProductEnsemble(self.terms + other.terms, self.dims)


def phase_exponents(r: int) -> List[int]:
    """
    e_0 = 0, e_m = (-1)^m 3^(m-1): the exponents of omega in 1, omega*, omega^3, omega*^9, ...

    Pairwise sums e_i + e_q are distinct over unordered pairs, so e_i - e_j - e_p + e_q
    vanishes only when {i, q} = {j, p}. Doubling exponents (1, omega*, omega^2, omega*^4)
    collide from r = 4 on: 2 e_1 = e_2 + e_3.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    return [0] + [(-1) ** m * 3 ** (m - 1) for m in range(1, r)]


def root_order(r: int) -> Tuple[int, np.ndarray]:
    """
    Exponent table m_ijpq = e_i - e_j - e_p + e_q and the order n0 = max |m_ijpq| + 1

    Returns:
    --------
    (int, np.ndarray) : n0 and the r x r x r x r integer table
    """
    e = np.asarray(phase_exponents(r), dtype=np.int64)
    table = (e[:, None, None, None] - e[None, :, None, None]
             - e[None, None, :, None] + e[None, None, None, :])
    return int(np.max(np.abs(table))) + 1, table


def roots_of_unity_sum(n0: int, p: int) -> complex:
    """sum_{k < n0} omega^(k p) with omega = exp(2 pi i / n0)"""
    k = np.arange(n0)
    return complex(np.sum(np.exp(2j * np.pi * ((k * p) % n0) / n0)))


def _embed(vector: np.ndarray, N: int) -> np.ndarray:
    out = np.zeros(N, dtype=complex)
    out[:vector.size] = vector
    return out


def roots_ensemble(sigma: SchmidtSpectrum) -> List[Tuple[float, np.ndarray, np.ndarray]]:
    """
    n0 product terms (w, u_k, conj(u_k)) on C^r (x) C^r with u_k = sum_i omega^(k e_i) sqrt(sigma_i) |i>

    Vectors are unit-normalized; the prefactor (sum sigma_i)^2 / n0 is the weight of every
    term. Together they reproduce roots_target(sigma).
    """
    r = sigma.rank
    n0, _ = root_order(r)
    exponents = np.asarray(phase_exponents(r), dtype=np.int64)
    amplitudes = np.sqrt(sigma.sigmas)
    total = float(np.sum(sigma.sigmas))
    weight = total ** 2 / n0

    terms = []
    for k in range(n0):
        phases = np.exp(2j * np.pi * ((k * exponents) % n0) / n0)
        u = phases * amplitudes / np.sqrt(total)
        terms.append((weight, u, u.conj()))
    return terms


def roots_target(sigma: SchmidtSpectrum) -> np.ndarray:
    """
    sum_{i,p} sigma_i sigma_p |ip><ip| + sum_{i != j} sigma_i sigma_j |ii><jj| on C^r (x) C^r
    """
    r = sigma.rank
    s = sigma.sigmas
    target = np.diag(np.outer(s, s).reshape(-1)).astype(complex)
    diagonal = np.arange(r) * r + np.arange(r)
    target[np.ix_(diagonal, diagonal)] += np.outer(s, s) - np.diag(s ** 2)
    return target


def werner_target(sigma: SchmidtSpectrum, N1: int, N2: int, lam: float) -> np.ndarray:
    """(1 - lam) I / (N1 N2) + lam |sigma><sigma|"""
    vector = sigma.state_vector(N1, N2)
    return (1 - lam) * np.eye(N1 * N2) / (N1 * N2) + lam * np.outer(vector, vector.conj())


def werner_pt_spectrum(sigma: SchmidtSpectrum, N1: int, N2: int, lam: float) -> np.ndarray:
    """
    Analytic spectrum of the partial transpose of werner_target, ascending

    (1 - lam)/(N1 N2) + lam sigma_i^2 for each i, (1 - lam)/(N1 N2) +- lam sigma_i sigma_j for
    i < j, and (1 - lam)/(N1 N2) for the remaining N1 N2 - r^2 directions.
    """
    if sigma.rank > min(N1, N2):
        raise InputShapeError(f"rank {sigma.rank} exceeds min({N1}, {N2})")
    base = (1 - lam) / (N1 * N2)
    s = sigma.sigmas
    values = [base + lam * s_i ** 2 for s_i in s]
    for i in range(sigma.rank):
        for j in range(i + 1, sigma.rank):
            values.extend([base + lam * s[i] * s[j], base - lam * s[i] * s[j]])
    values.extend([base] * (N1 * N2 - sigma.rank ** 2))
    return np.sort(np.asarray(values))


def _werner_grid(sigma: SchmidtSpectrum, N1: int, N2: int) -> Tuple[float, np.ndarray]:
    """
    lambda* and the diagonal weights D[i, j] of |i><i| (x) |j><j| such that
    lambda* (roots_target + diag D) equals werner_target at lambda*
    """
    r = sigma.rank
    s01 = sigma.product
    lambda_star = 1.0 / (1.0 + N1 * N2 * s01)

    grid = np.full((N1, N2), s01)
    grid[:r, :r] -= np.outer(sigma.sigmas, sigma.sigmas) - np.diag(sigma.sigmas ** 2)
    if np.min(grid) < -NEGATIVE_SLACK:
        raise ArithmeticError(f"diagonal slack is negative ({np.min(grid):.3e})")
    return lambda_star, lambda_star * np.clip(grid, 0.0, None)


def _assemble(grid: np.ndarray, roots_scale: float, sigma: SchmidtSpectrum,
              N1: int, N2: int) -> List[ProductTerm]:
    terms = []
    for i, j in zip(*np.nonzero(grid > WEIGHT_FLOOR)):
        a = np.zeros(N1, dtype=complex)
        b = np.zeros(N2, dtype=complex)
        a[i] = 1.0
        b[j] = 1.0
        terms.append(ProductTerm(float(grid[i, j]), a, b))
    if roots_scale > 0:
        for weight, u, v in roots_ensemble(sigma):
            terms.append(ProductTerm(roots_scale * weight, _embed(u, N1), _embed(v, N2)))
    return terms


def werner_separable_ensemble(sigma: SchmidtSpectrum, N1: int, N2: int) -> ProductEnsemble:
    """
    Product ensemble of (1 - lambda*) I/(N1 N2) + lambda* |sigma><sigma| at its threshold

    lambda* = 1/(1 + N1 N2 sigma_0 sigma_1). The diagonal grid covers every basis product
    outside the r x r block plus the nonnegative slack inside it; the roots-of-unity terms
    supply the coherences.

    Raises:
    -------
    InputShapeError : rank below 2 or above min(N1, N2)
    """
    r = sigma.rank
    if r < 2:
        raise InputShapeError("the Werner assembly needs Schmidt rank >= 2; product states are trivially separable")
    if r > min(N1, N2):
        raise InputShapeError(f"rank {r} exceeds min({N1}, {N2})")

    lambda_star, grid = _werner_grid(sigma, N1, N2)
    ensemble = ProductEnsemble(tuple(_assemble(grid, lambda_star, sigma, N1, N2)), (N1, N2))
    logger.debug("Werner ensemble: %d terms, lambda*=%.12f", len(ensemble), lambda_star)
    return ensemble


def certify_separable(lam: float, M1, M2, z: PureState, tol: float = RANK_TOL) -> ProductEnsemble:
    """
    Explicit product ensemble of (1 - lam) M1 (x) M2 + lam |z><z| for lam <= lambda*(z)

    Works in the frame of the complemented factors: there the state is a multiple of a
    Werner state of the r1 x r2 block, mixed from the Werner ensemble at its threshold and
    the identity basis ensemble, then every term is carried back through the local factors.

    Parameters:
    -----------
    lam : float
        Mixing weight in [0, lambda*(z)]
    M1, M2 : array
        PSD marginals of the centre; trace-normalized internally
    z : PureState
        Bipartite pure state inside R(M1) (x) R(M2)

    Returns:
    --------
    ProductEnsemble : reconstructing the state on C^N1 (x) C^N2

    Raises:
    -------
    NoCertificateError : lam exceeds lambda*(z)
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    N1, N2 = z.dims.dims
    frame = local_frame(z, M1, M2, tol)
    r1, r2 = frame.r1, frame.r2

    # in the block frame the state is scale * [alpha Werner(t) + (1 - alpha) I/(r1 r2)] rotated by
    # R1 (x) R2, where the full SVD unitaries satisfy block = R1 diag(s) R2^T
    U, s, Vh = np.linalg.svd(frame.block)
    rank = max(1, int(np.count_nonzero(s > tol * s[0])))
    sigma = SchmidtSpectrum.from_values(s[:rank])
    R1, R2 = U, Vh.T

    t = 1.0 / (1.0 + r1 * r2 * sigma.product)
    lambda_star = remap_threshold(t, frame.c, r1, r2)
    if lam > lambda_star + CERTIFY_SLACK:
        raise NoCertificateError(f"lam={lam:.12f} exceeds lambda*={lambda_star:.12f}; no separable ensemble exists")

    scale = (1 - lam) * r1 * r2 + lam * frame.c
    alpha = min(1.0, (lam * frame.c / scale) / t)

    if rank >= 2:
        _, werner_grid = _werner_grid(sigma, r1, r2)
        grid = alpha * werner_grid
        roots_scale = alpha * t
    else:
        grid = np.zeros((r1, r2))
        grid[0, 0] = alpha
        roots_scale = 0.0
    grid = grid + (1 - alpha) / (r1 * r2)

    F1 = frame.F1[:, :r1] @ R1
    F2 = frame.F2[:, :r2] @ R2
    terms = []
    for block_term in _assemble(grid, roots_scale, sigma, r1, r2):
        x = F1 @ block_term.a
        y = F2 @ block_term.b
        nx, ny = np.linalg.norm(x), np.linalg.norm(y)
        terms.append(ProductTerm(block_term.weight * scale * nx ** 2 * ny ** 2, x / nx, y / ny))

    ensemble = ProductEnsemble(tuple(terms), (N1, N2))
    logger.debug("certificate: lam=%.10f, lambda*=%.10f, alpha=%.6f, %d terms",
                 lam, lambda_star, alpha, len(ensemble))
    return ensemble


def certify_separable_mixture(lam: float, M1, M2, ensemble: Sequence[Tuple[float, PureState]],
                              tol: float = RANK_TOL) -> ProductEnsemble:
    """
    Explicit product ensemble of (1 - lam) M1 (x) M2 + lam sum_k e_k |e_k><e_k| for lam <= lambda_bar

    Splits the state into sum_k mu_k [(1 - lam_k) M1 (x) M2 + lam_k |e_k><e_k|] with
    mu_k = lambda_bar e_k / lambda*(e_k) and lam_k = lam lambda*(e_k) / lambda_bar.
    """
    if len(ensemble) == 0:
        raise ValueError("ensemble is empty")
    thresholds = [lambda_star_pure(vector, M1, M2, tol) for _, vector in ensemble]
    bar = 1.0 / sum(weight / threshold for (weight, _), threshold in zip(ensemble, thresholds))
    if lam > bar + CERTIFY_SLACK:
        raise NoCertificateError(f"lam={lam:.12f} exceeds lambda_bar={bar:.12f}")

    combined = None
    for (weight, vector), threshold in zip(ensemble, thresholds):
        mu = bar * weight / threshold
        lam_k = min(lam * threshold / bar, threshold)
        part = certify_separable(lam_k, M1, M2, vector, tol).scaled(mu)
        combined = part if combined is None else combined.merged(part)
    return combined
