"""Exception hierarchy shared by every module."""


class NanoradarError(Exception):
    """Base class. ``stage`` is filled in by the radar pipeline when it re-raises."""

    stage: str | None = None


class DomainError(NanoradarError, ValueError):
    """Input outside the mathematical or physical domain of an operation."""


class NumericalError(NanoradarError, ArithmeticError):
    """A computation failed to converge or produced a non-finite value."""


class PoleError(NumericalError):
    """Evaluation exactly at a resonance pole."""


class UnsupportedConfigurationError(NanoradarError):
    """The requested combination of particle and model is not available."""


class ConfigError(NanoradarError, ValueError):
    """Run configuration failed schema or physical validation."""
