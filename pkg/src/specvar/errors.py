"""Exception types shared across the library."""


class SpecvarError(Exception):
    """Base class for all library errors."""


class ValidationError(SpecvarError):
    """Invalid argument, configuration or kernel specification."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of an operation."""


class NumericError(SpecvarError):
    """A numerical routine failed to reach its target tolerance.

    Carries the tolerance actually achieved (when known) so callers can
    decide whether a degraded answer is still usable.
    """

    def __init__(self, message, achieved_tol=None, diagnostics=None):
        super().__init__(message)
        self.achieved_tol = achieved_tol
        self.diagnostics = diagnostics or {}
