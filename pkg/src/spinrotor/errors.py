"""Exception hierarchy.

Every exception carries an ``error_code`` that the command-line front end
prints as a machine-parsable prefix on stderr.
"""


class SpinrotorError(Exception):
    error_code = "spinrotor_error"


class ConfigurationError(SpinrotorError, ValueError):
    error_code = "config_error"


class DomainError(SpinrotorError, ValueError):
    error_code = "domain_error"


class RadiusBoundError(DomainError):
    """Raised when r**2 * Omega**2 >= 1 (tangential speed reaches c)."""

    error_code = "radius_bound"


class UnsupportedParameterError(DomainError):
    error_code = "unsupported_parameter"


class SingularMapError(DomainError):
    error_code = "singular_map"


class FrameError(DomainError):
    error_code = "frame_mismatch"


class PreconditionError(DomainError):
    error_code = "precondition"


class NonNormalizableError(DomainError):
    error_code = "non_normalizable"


class DegeneratePairError(DomainError):
    error_code = "degenerate_pair"


class InconclusiveError(SpinrotorError, RuntimeError):
    error_code = "inconclusive"


class CalibrationError(SpinrotorError, RuntimeError):
    error_code = "calibration_failed"
