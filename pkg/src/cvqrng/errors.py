"""Exception types shared across the workbench."""

__all__ = ["CalibrationError", "ConfigError", "ResourceLimitError"]


class CalibrationError(Exception):
    """Measured noise budget is inconsistent with a secure configuration.

    Raised in particular when the derived quadrature variance is not
    positive, which means the device must not be trusted as a randomness
    source under the current calibration.
    """


class ConfigError(Exception):
    """A configuration file or value violates a documented constraint."""


class ResourceLimitError(Exception):
    """A request exceeds a configured memory or size cap."""
