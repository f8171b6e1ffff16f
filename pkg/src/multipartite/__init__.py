from .genuine_entanglement import (
    CutRecord,
    BipartitionScan,
    canonical_bipartitions,
    apply_local,
    genuine_threshold,
    check_genuine,
    family_threshold,
    g_of_n,
    slocc_threshold,
    FAMILIES
)

__all__ = [
    'CutRecord',
    'BipartitionScan',
    'canonical_bipartitions',
    'apply_local',
    'genuine_threshold',
    'check_genuine',
    'family_threshold',
    'g_of_n',
    'slocc_threshold',
    'FAMILIES'
]
