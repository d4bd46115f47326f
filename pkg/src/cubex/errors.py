"""Exception types shared across the package."""


class CubexError(Exception):
    """Base class for all package errors."""


class InputError(CubexError, ValueError):
    """Malformed or inconsistent input data."""


class DomainError(CubexError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class AmbientDimensionError(CubexError, ValueError):
    """The declared ambient dimension is too small for the complex."""


class CapExceeded(CubexError, RuntimeError):
    """A configurable size cap was hit before the computation finished."""

    def __init__(self, message, size=None, partial=None):
        super().__init__(message)
        self.size = size
        self.partial = partial
