# src/linalg/__init__.py
from .decompositions import (
    HermitianEig,
    GsvdResult,
    as_cmatrix,
    eig_hermitian,
    svd,
    gsvd,
    psd_factor,
    orthogonal_complementation,
    rank_tol,
    range_basis,
)

__all__ = [
    'HermitianEig',
    'GsvdResult',
    'as_cmatrix',
    'eig_hermitian',
    'svd',
    'gsvd',
    'psd_factor',
    'orthogonal_complementation',
    'rank_tol',
    'range_basis'
]
