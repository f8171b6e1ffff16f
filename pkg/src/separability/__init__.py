from .thresholds import (
    SeparabilityStatus,
    Verdict,
    LocalFrame,
    ThresholdDetail,
    local_frame,
    remap_threshold,
    lambda_star_detail,
    lambda_star_pure,
    lambda_bar,
    ppt_boundary,
    check
)
from .werner_ensemble import (
    ProductTerm,
    ProductEnsemble,
    phase_exponents,
    root_order,
    roots_of_unity_sum,
    roots_ensemble,
    roots_target,
    werner_target,
    werner_pt_spectrum,
    werner_separable_ensemble,
    certify_separable,
    certify_separable_mixture
)

__all__ = [
    'SeparabilityStatus',
    'Verdict',
    'LocalFrame',
    'ThresholdDetail',
    'local_frame',
    'remap_threshold',
    'lambda_star_detail',
    'lambda_star_pure',
    'lambda_bar',
    'ppt_boundary',
    'check',
    'ProductTerm',
    'ProductEnsemble',
    'phase_exponents',
    'root_order',
    'roots_of_unity_sum',
    'roots_ensemble',
    'roots_target',
    'werner_target',
    'werner_pt_spectrum',
    'werner_separable_ensemble',
    'certify_separable',
    'certify_separable_mixture'
]

EXIT_CODES = {
    SeparabilityStatus.SEPARABLE: 0,
    SeparabilityStatus.ENTANGLED: 3,
    SeparabilityStatus.INCONCLUSIVE: 4
}
