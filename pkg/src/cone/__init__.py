from .cone_geometry import (
    FaceInfo,
    ConeDecomposition,
    CentreSearchResult,
    face_of,
    default_centre,
    ray_to_boundary,
    decompose,
    spectral_ensemble,
    search_rank_one_centre
)

__all__ = [
    'FaceInfo',
    'ConeDecomposition',
    'CentreSearchResult',
    'face_of',
    'default_centre',
    'ray_to_boundary',
    'decompose',
    'spectral_ensemble',
    'search_rank_one_centre'
]
