# src/states/state_operations.py
import logging
from functools import reduce
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from src.config.settings import PSD_TOL, RANK_TOL
from src.linalg.decompositions import as_cmatrix, gsvd, svd
from src.states.quantum_states import DimSpec, MixedState, PureState, SchmidtSpectrum
from src.utils.errors import InputShapeError

logger = logging.getLogger(__name__)


def kron_all(matrices: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product of a sequence of arrays, left to right"""
    if len(matrices) == 0:
        raise InputShapeError("need at least one factor for a Kronecker product")
    return reduce(np.kron, [np.asarray(m, dtype=complex) for m in matrices])


def _require_bipartite(dims: DimSpec, what: str):
    if not dims.is_bipartite():
        raise InputShapeError(f"{what} needs a bipartite state, got {dims.n} factors")


def _validate_part(part: Iterable[int], n: int) -> Tuple[int, ...]:
    part = tuple(sorted({int(i) for i in part}))
    if len(part) == 0 or len(part) == n:
        raise InputShapeError(f"cut {part} must be a nonempty proper subset of {n} factors")
    if part[0] < 0 or part[-1] >= n:
        raise InputShapeError(f"cut {part} has factor indices outside 0..{n - 1}")
    return part


def complement(part: Iterable[int], n: int) -> Tuple[int, ...]:
    part = set(part)
    return tuple(i for i in range(n) if i not in part)


def coefficient_matrix(z: PureState) -> np.ndarray:
    """
    N1 x N2 matrix of amplitudes, first factor indexing rows

    Raises:
    -------
    InputShapeError : z is not bipartite
    """
    _require_bipartite(z.dims, "coefficient_matrix")
    N1, N2 = z.dims.dims
    return z.amplitudes.reshape(N1, N2).copy()


def bipartition_reshape(z: PureState, part: Iterable[int]) -> np.ndarray:
    """
    Reshape the amplitude tensor into a matrix across the cut part | complement

    Rows are indexed by the factors in part (ascending), columns by the remaining factors.

    Parameters:
    -----------
    z : PureState
    part : iterable of int
        0-based factor indices; must be nonempty and proper

    Returns:
    --------
    np.ndarray : prod(N_part) x prod(N_rest) matrix with the same Frobenius norm as z
    """
    n = z.dims.n
    part = _validate_part(part, n)
    rest = complement(part, n)
    tensor = z.amplitudes.reshape(z.dims.dims)
    rows = int(np.prod([z.dims[i] for i in part]))
    cols = int(np.prod([z.dims[i] for i in rest]))
    return np.transpose(tensor, part + rest).reshape(rows, cols)


def schmidt_coefficients(z: PureState, part: Iterable[int] = (0,),
                         tol: float = RANK_TOL) -> SchmidtSpectrum:
    """Schmidt coefficients of z across part | complement, truncated at tol * sigma_max"""
    result = svd(bipartition_reshape(z, part), tol=tol)
    return SchmidtSpectrum.from_values(result.sigmas)


def generalized_spectrum(matrix: np.ndarray, A: np.ndarray, B: np.ndarray,
                         tol: float = RANK_TOL) -> SchmidtSpectrum:
    """
    Normalized generalized Schmidt coefficients of a coefficient matrix

    A and B are metrics on the row and column Hilbert spaces. The column index of a
    coefficient matrix carries the second factor transposed, so the GSVD uses conj(B)
    as its column metric.
    """
    B = as_cmatrix(B, "metric B")
    result = gsvd(matrix, A, B.conj(), tol=tol)
    return SchmidtSpectrum.from_values(result.sigmas)


def generalized_schmidt(z: PureState, A, B, tol: float = RANK_TOL) -> SchmidtSpectrum:
    """
    Generalized Schmidt coefficients of a bipartite z w.r.t. metrics (A, B),
    renormalized to unit 2-norm

    Raises:
    -------
    MetricError : A or B is not Hermitian positive definite or has the wrong size
    """
    return generalized_spectrum(coefficient_matrix(z), A, B, tol=tol)


def _operator_and_dims(rho: Union[MixedState, np.ndarray], dims=None):
    if isinstance(rho, MixedState):
        return rho.matrix, rho.dims
    if dims is None:
        raise InputShapeError("dims are required when passing a raw matrix")
    dims = dims if isinstance(dims, DimSpec) else DimSpec(tuple(dims))
    matrix = as_cmatrix(rho, "operator")
    if matrix.shape != (dims.total, dims.total):
        raise InputShapeError(f"operator has shape {matrix.shape}, expected {dims.total}x{dims.total}")
    return matrix, dims


def partial_transpose(rho: Union[MixedState, np.ndarray], factor: int = 1, dims=None) -> np.ndarray:
    """
    Block transpose of a bipartite operator on factor 1 or 2

    Accepts a MixedState or a raw square matrix together with its dims.
    """
    matrix, dims = _operator_and_dims(rho, dims)
    _require_bipartite(dims, "partial_transpose")
    if factor not in (1, 2):
        raise InputShapeError(f"factor must be 1 or 2, got {factor}")

    N1, N2 = dims.dims
    tensor = matrix.reshape(N1, N2, N1, N2)
    axes = (2, 1, 0, 3) if factor == 1 else (0, 3, 2, 1)
    return tensor.transpose(axes).reshape(N1 * N2, N1 * N2)


def partial_trace(rho: Union[MixedState, np.ndarray], keep: Iterable[int], dims=None) -> np.ndarray:
    """
    Trace out every factor not listed in keep (0-based, any number of factors)

    The kept factors stay in ascending order.
    """
    matrix, dims = _operator_and_dims(rho, dims)
    n = dims.n
    keep = sorted({int(i) for i in keep})
    if any(i < 0 or i >= n for i in keep):
        raise InputShapeError(f"keep {keep} has factor indices outside 0..{n - 1}")

    tensor = matrix.reshape(dims.dims + dims.dims)
    current = n
    for axis in reversed(range(n)):
        if axis in keep:
            continue
        tensor = np.trace(tensor, axis1=axis, axis2=axis + current)
        current -= 1

    kept_total = int(np.prod([dims[i] for i in keep])) if keep else 1
    return tensor.reshape(kept_total, kept_total)


def min_pt_eigenvalue(matrix: np.ndarray, dims) -> float:
    """Smallest eigenvalue of the first-factor partial transpose of a raw matrix"""
    pt = partial_transpose(matrix, 1, dims=dims)
    return float(np.linalg.eigvalsh((pt + pt.conj().T) / 2)[0])


def is_ppt(rho: MixedState, tol: float = PSD_TOL) -> Tuple[bool, float]:
    """
    PPT test on a bipartite state

    Returns:
    --------
    (bool, float) : whether the partial transpose is PSD within tol, and its minimum eigenvalue
    """
    _require_bipartite(rho.dims, "is_ppt")
    min_eigenvalue = min_pt_eigenvalue(rho.matrix, rho.dims)
    return min_eigenvalue >= -tol, min_eigenvalue
