# src/utils/errors.py


class SeparabilityError(ValueError):
    """Base class for every error raised by the separability library."""


class InputShapeError(SeparabilityError):
    """Matrix or state has the wrong shape, dimensions or non-finite entries."""


class InvalidStateError(SeparabilityError):
    """State violates normalization, Hermiticity or positivity."""


class MetricError(SeparabilityError):
    """A GSVD metric is not Hermitian positive definite."""


class NotPSDError(SeparabilityError):
    """Matrix is indefinite beyond the positivity tolerance."""


class RankDeficientError(SeparabilityError):
    """Column factor does not have full column rank."""


class FaceError(SeparabilityError):
    """State does not lie in the expected face of the PSD cone."""


class DegenerateRayError(SeparabilityError):
    """The ray from the centre through the state is undefined (state equals centre)."""


class NoCertificateError(SeparabilityError):
    """No separable ensemble exists for the requested mixing weight."""


class SingularOperatorError(SeparabilityError):
    """A local operator expected to be invertible is singular."""


class MemoryGuardError(SeparabilityError):
    """Dense working set would exceed the configured dimension cap."""


class StateFileError(SeparabilityError):
    """State file could not be parsed or fails validation."""


class ConfigurationError(SeparabilityError):
    """Environment configuration value is malformed."""
