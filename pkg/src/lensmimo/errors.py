"""Exception hierarchy shared across the package."""


class LensMimoError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(LensMimoError):
    """A function argument violates its documented precondition."""


class DegenerateInputError(InvalidInputError):
    """Input is structurally valid but degenerate (e.g. all-zero gains)."""


class NumericalError(LensMimoError):
    """A numerical routine failed (singular/indefinite matrix, ...)."""


class AccuracyError(LensMimoError):
    """A quadrature did not converge to the requested accuracy."""


class IdealAngleError(InvalidInputError):
    """Angles are not ideal (nonzero misalignment or duplicate focusing
    indices); the caller should use the general PDM transceiver instead."""


class UnsupportedConfigurationError(LensMimoError):
    """Neither the receive nor the transmit side is angle-separated, so
    path grouping is undefined."""


class StatisticalValidityError(InvalidInputError):
    """Too few Monte Carlo samples for a statistically meaningful result."""


class ConfigError(LensMimoError):
    """Bad experiment configuration (unknown key, missing value, ...)."""
