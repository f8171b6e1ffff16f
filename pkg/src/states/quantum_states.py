# src/states/quantum_states.py
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.linalg.decompositions import as_cmatrix
from src.utils.errors import InputShapeError, InvalidStateError

NORM_TOL = 1e-10


@dataclass(frozen=True)
class DimSpec:
    """Ordered local dimensions N_1, ..., N_n of a tensor-product space"""
    dims: Tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if len(dims) < 2:
            raise InputShapeError(f"need at least two tensor factors, got {len(dims)}")
        if any(d < 1 for d in dims):
            raise InputShapeError(f"local dimensions must be >= 1, got {dims}")
        object.__setattr__(self, "dims", dims)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def total(self) -> int:
        return int(np.prod(self.dims))

    def is_bipartite(self) -> bool:
        return self.n == 2

    def __iter__(self):
        return iter(self.dims)

    def __getitem__(self, index):
        return self.dims[index]


def _as_dimspec(dims) -> DimSpec:
    return dims if isinstance(dims, DimSpec) else DimSpec(tuple(dims))


@dataclass(frozen=True)
class PureState:
    """Unit amplitude vector on the space described by dims"""
    dims: DimSpec
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _as_dimspec(self.dims)
        amplitudes = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != dims.total:
            raise InputShapeError(
                f"amplitude vector has length {amplitudes.size}, expected {dims.total}"
            )
        if not np.all(np.isfinite(amplitudes)):
            raise InvalidStateError("amplitudes contain NaN or Inf")
        norm = np.linalg.norm(amplitudes)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"pure state norm is {norm:.12f}, expected 1")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_vector(cls, vector, dims, normalize: bool = True) -> "PureState":
        vector = np.asarray(vector, dtype=complex).reshape(-1)
        if normalize:
            norm = np.linalg.norm(vector)
            if norm == 0:
                raise InvalidStateError("cannot normalize the zero vector")
            vector = vector / norm
        return cls(_as_dimspec(dims), vector)

    @property
    def n(self) -> int:
        return self.dims.n

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def to_mixed(self) -> "MixedState":
        return MixedState(self.dims, self.projector())


@dataclass(frozen=True)
class MixedState:
    """Unit-trace Hermitian PSD density matrix on the space described by dims"""
    dims: DimSpec
    matrix: np.ndarray

    def __post_init__(self):
        dims = _as_dimspec(self.dims)
        matrix = as_cmatrix(self.matrix, "density matrix")
        if matrix.shape != (dims.total, dims.total):
            raise InputShapeError(
                f"density matrix has shape {matrix.shape}, expected {dims.total}x{dims.total}"
            )
        if np.linalg.norm(matrix - matrix.conj().T) > NORM_TOL * max(np.linalg.norm(matrix), 1.0):
            raise InvalidStateError("density matrix is not Hermitian")
        matrix = (matrix + matrix.conj().T) / 2
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > NORM_TOL:
            raise InvalidStateError(f"density matrix trace is {trace:.12f}, expected 1")
        min_eigenvalue = np.linalg.eigvalsh(matrix)[0]
        if min_eigenvalue < -NORM_TOL:
            raise InvalidStateError(f"density matrix has negative eigenvalue {min_eigenvalue:.3e}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_matrix(cls, matrix, dims, normalize: bool = True) -> "MixedState":
        matrix = as_cmatrix(matrix, "density matrix")
        if normalize:
            trace = np.trace(matrix).real
            if trace <= 0:
                raise InvalidStateError(f"cannot normalize a matrix with trace {trace:.3e}")
            matrix = matrix / trace
        return cls(_as_dimspec(dims), matrix)

    @property
    def n(self) -> int:
        return self.dims.n


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Nonincreasing positive (generalized) Schmidt coefficients with unit 2-norm"""
    sigmas: np.ndarray
    rank: int

    def __post_init__(self):
        sigmas = np.asarray(self.sigmas, dtype=float).reshape(-1)
        if sigmas.size == 0 or np.any(sigmas <= 0):
            raise InvalidStateError("Schmidt coefficients must be positive")
        if np.any(np.diff(sigmas) > NORM_TOL):
            raise InvalidStateError("Schmidt coefficients must be nonincreasing")
        if abs(np.sum(sigmas ** 2) - 1.0) > NORM_TOL:
            raise InvalidStateError("Schmidt coefficients must satisfy sum(sigma^2) = 1")
        if int(self.rank) != sigmas.size:
            raise InvalidStateError(f"rank {self.rank} does not match {sigmas.size} coefficients")
        object.__setattr__(self, "sigmas", sigmas)
        object.__setattr__(self, "rank", int(self.rank))

    @classmethod
    def from_values(cls, values: Sequence[float], tol: float = 0.0) -> "SchmidtSpectrum":
        """Sort descending, drop entries at or below tol * max, normalize to unit 2-norm"""
        values = np.sort(np.asarray(values, dtype=float).reshape(-1))[::-1]
        if values.size == 0 or values[0] <= 0:
            raise InvalidStateError("need at least one positive Schmidt coefficient")
        values = values[values > tol * values[0]]
        values = values / np.linalg.norm(values)
        return cls(values, values.size)

    @property
    def sigma0(self) -> float:
        return float(self.sigmas[0])

    @property
    def sigma1(self) -> float:
        # zero for product states so threshold formulas degrade to 1
        return float(self.sigmas[1]) if self.rank > 1 else 0.0

    @property
    def product(self) -> float:
        return self.sigma0 * self.sigma1

    def state_vector(self, N1: int, N2: int) -> np.ndarray:
        """|sigma> = sum_i sigma_i |ii> embedded in C^N1 (x) C^N2"""
        if self.rank > min(N1, N2):
            raise InputShapeError(f"rank {self.rank} exceeds min({N1}, {N2})")
        vector = np.zeros(N1 * N2, dtype=complex)
        for i, sigma in enumerate(self.sigmas):
            vector[i * N2 + i] = sigma
        return vector
