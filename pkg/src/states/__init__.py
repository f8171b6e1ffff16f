from .quantum_states import DimSpec, PureState, MixedState, SchmidtSpectrum
from .state_operations import (
    kron_all,
    complement,
    coefficient_matrix,
    bipartition_reshape,
    schmidt_coefficients,
    generalized_spectrum,
    generalized_schmidt,
    partial_transpose,
    partial_trace,
    min_pt_eigenvalue,
    is_ppt
)
from .demo_states import (
    DemoStates,
    random_pure_state,
    random_psd,
    random_density_matrix,
    basis_vector
)

__all__ = [
    'DimSpec',
    'PureState',
    'MixedState',
    'SchmidtSpectrum',
    'kron_all',
    'complement',
    'coefficient_matrix',
    'bipartition_reshape',
    'schmidt_coefficients',
    'generalized_spectrum',
    'generalized_schmidt',
    'partial_transpose',
    'partial_trace',
    'min_pt_eigenvalue',
    'is_ppt',
    'DemoStates',
    'random_pure_state',
    'random_psd',
    'random_density_matrix',
    'basis_vector'
]
