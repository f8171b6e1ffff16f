# src/states/demo_states.py
import logging
from typing import Dict, Optional, Sequence

import numpy as np

from src.states.quantum_states import DimSpec, MixedState, PureState
from src.states.state_operations import kron_all
from src.utils.errors import InputShapeError

logger = logging.getLogger(__name__)


def random_pure_state(dims, rng: np.random.Generator) -> PureState:
    """Haar-random pure state: i.i.d. standard complex Gaussian amplitudes, normalized"""
    dims = dims if isinstance(dims, DimSpec) else DimSpec(tuple(dims))
    vector = rng.standard_normal(dims.total) + 1j * rng.standard_normal(dims.total)
    return PureState.from_vector(vector, dims)


def random_psd(N: int, rng: np.random.Generator, rank: Optional[int] = None) -> np.ndarray:
    """Ginibre product G G^dagger with G of shape N x rank, trace-normalized"""
    rank = N if rank is None else rank
    if rank < 1 or rank > N:
        raise InputShapeError(f"rank must lie in 1..{N}, got {rank}")
    G = rng.standard_normal((N, rank)) + 1j * rng.standard_normal((N, rank))
    M = G @ G.conj().T
    return M / np.trace(M).real


def random_density_matrix(dims, rng: np.random.Generator, rank: Optional[int] = None) -> MixedState:
    dims = dims if isinstance(dims, DimSpec) else DimSpec(tuple(dims))
    return MixedState.from_matrix(random_psd(dims.total, rng, rank=rank), dims)


def basis_vector(N: int, index: int) -> np.ndarray:
    vector = np.zeros(N, dtype=complex)
    vector[index] = 1.0
    return vector


class DemoStates:
    """
    Provides curated test states for demos, tests and the benchmark harness
    """

    @staticmethod
    def get_available_states() -> Dict[str, Dict]:
        """
        Get list of available demo states
        """
        return {
            "bell": {
                "description": "Maximally entangled two-qubit state (|00> + |11>)/sqrt(2)",
                "kind": "pure",
                "parameters": [],
                "use_cases": ["schmidt", "werner"]
            },
            "basis": {
                "description": "Computational basis product state |i1 ... in>",
                "kind": "pure",
                "parameters": ["dims", "indices"],
                "use_cases": ["schmidt"]
            },
            "ghz": {
                "description": "GHZ state sum_k |k...k>/sqrt(d) on n parties of dimension d",
                "kind": "pure",
                "parameters": ["n", "d"],
                "use_cases": ["genuine", "schmidt"]
            },
            "w": {
                "description": "W state on n qubits, one excitation in uniform superposition",
                "kind": "pure",
                "parameters": ["n"],
                "use_cases": ["genuine", "schmidt"]
            },
            "isotropic": {
                "description": "(1 - lambda) I/(N1 N2) + lambda |Psi+><Psi+| on 2x2",
                "kind": "mixed",
                "parameters": ["lam"],
                "use_cases": ["check", "decompose"]
            },
            "harmonic_gap": {
                "description": "(1 - lambda) I/4 + lambda (|01><01| + |Psi+><Psi+|)/2",
                "kind": "mixed",
                "parameters": ["lam"],
                "use_cases": ["check"]
            },
            "random_pure": {
                "description": "Haar-random pure state",
                "kind": "pure",
                "parameters": ["dims", "seed"],
                "use_cases": ["schmidt", "genuine"]
            },
            "random_mixed": {
                "description": "Ginibre-random full-rank density matrix",
                "kind": "mixed",
                "parameters": ["dims", "seed"],
                "use_cases": ["check", "decompose"]
            }
        }

    @staticmethod
    def available_states():
        return list(DemoStates.get_available_states().keys())

    @staticmethod
    def load_state(name: str, **params):
        """
        Build the named demo state
        """
        if name == "bell":
            return DemoStates.bell()
        elif name == "basis":
            return DemoStates.basis(params.get("dims", (2, 2)), params.get("indices"))
        elif name == "ghz":
            return DemoStates.ghz(params.get("n", 3), params.get("d", 2))
        elif name == "w":
            return DemoStates.w(params.get("n", 3))
        elif name == "isotropic":
            return DemoStates.isotropic(params.get("lam", 0.5))
        elif name == "harmonic_gap":
            return DemoStates.harmonic_gap(params.get("lam", 0.6))
        elif name == "random_pure":
            rng = np.random.default_rng(params.get("seed", 0))
            return random_pure_state(params.get("dims", (2, 2)), rng)
        elif name == "random_mixed":
            rng = np.random.default_rng(params.get("seed", 0))
            return random_density_matrix(params.get("dims", (2, 2)), rng)
        else:
            raise ValueError(f"Unknown demo state: {name}")

    @staticmethod
    def bell() -> PureState:
        return PureState.from_vector([1, 0, 0, 1], (2, 2))

    @staticmethod
    def basis(dims, indices: Optional[Sequence[int]] = None) -> PureState:
        dims = dims if isinstance(dims, DimSpec) else DimSpec(tuple(dims))
        indices = [0] * dims.n if indices is None else list(indices)
        if len(indices) != dims.n:
            raise InputShapeError(f"need {dims.n} basis indices, got {len(indices)}")
        return DemoStates.product([basis_vector(N, i) for N, i in zip(dims, indices)])

    @staticmethod
    def product(vectors: Sequence) -> PureState:
        """Normalized tensor product of local vectors"""
        vectors = [np.asarray(v, dtype=complex).reshape(-1) for v in vectors]
        vectors = [v / np.linalg.norm(v) for v in vectors]
        return PureState.from_vector(kron_all(vectors), tuple(v.size for v in vectors))

    @staticmethod
    def ghz(n: int, d: int = 2) -> PureState:
        if n < 2 or d < 2:
            raise InputShapeError(f"GHZ needs n >= 2 and d >= 2, got n={n}, d={d}")
        vector = np.zeros(d ** n, dtype=complex)
        step = sum(d ** k for k in range(n))
        vector[[k * step for k in range(d)]] = 1.0
        return PureState.from_vector(vector, (d,) * n)

    @staticmethod
    def w(n: int) -> PureState:
        if n < 2:
            raise InputShapeError(f"W needs n >= 2, got {n}")
        vector = np.zeros(2 ** n, dtype=complex)
        vector[[2 ** k for k in range(n)]] = 1.0
        return PureState.from_vector(vector, (2,) * n)

    @staticmethod
    def werner(z: PureState, lam: float, marginals: Optional[Sequence[np.ndarray]] = None) -> MixedState:
        """
        (1 - lam) M_1 (x) ... (x) M_n + lam |z><z|

        marginals default to I/N_i. Each M_i is trace-normalized.
        """
        if not 0.0 <= lam <= 1.0:
            raise ValueError(f"lam must lie in [0, 1], got {lam}")
        if marginals is None:
            marginals = [np.eye(N) / N for N in z.dims]
        if len(marginals) != z.dims.n:
            raise InputShapeError(f"need {z.dims.n} marginals, got {len(marginals)}")
        marginals = [np.asarray(M, dtype=complex) / np.trace(M).real for M in marginals]
        centre = kron_all(marginals)
        return MixedState(z.dims, (1 - lam) * centre + lam * z.projector())

    @staticmethod
    def isotropic(lam: float, N: int = 2) -> MixedState:
        """Werner-type state built on the maximally entangled N x N vector"""
        vector = np.zeros(N * N, dtype=complex)
        vector[[i * N + i for i in range(N)]] = 1.0
        return DemoStates.werner(PureState.from_vector(vector, (N, N)), lam)

    @staticmethod
    def harmonic_gap_boundary() -> MixedState:
        """(|01><01| + |Psi+><Psi+|) / 2"""
        bell = DemoStates.bell().projector()
        flip = DemoStates.basis((2, 2), (0, 1)).projector()
        return MixedState((2, 2), (bell + flip) / 2)

    @staticmethod
    def harmonic_gap(lam: float) -> MixedState:
        boundary = DemoStates.harmonic_gap_boundary().matrix
        return MixedState((2, 2), (1 - lam) * np.eye(4) / 4 + lam * boundary)
