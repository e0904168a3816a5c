"""Exception hierarchy shared across the package."""


class EntanglerError(Exception):
    """Base class for all package errors."""


class LayoutError(EntanglerError):
    """Operator/state shape does not match the declared Hilbert-space layout."""


class ConfigError(EntanglerError):
    """Invalid experiment configuration (CLI exit code 2)."""


class NumericalError(EntanglerError):
    """Numerical procedure failed (CLI exit code 3)."""


class IntegrationError(NumericalError):
    """Time integration did not converge; carries solver diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class SteadyStateAmbiguityError(NumericalError):
    """Null-space threshold could not cleanly separate zero singular values."""


class DegenerateSteadyStateError(NumericalError):
    """Operation requires a unique steady state but the null space is degenerate."""
