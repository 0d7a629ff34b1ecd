"""Exception types shared across the package."""


class QcnmfError(Exception):
    """Base class for all errors raised by qcnmf."""


class ShapeError(QcnmfError, ValueError):
    """Operand dimensions do not agree."""


class DomainError(QcnmfError, ValueError):
    """A value lies outside the admissible domain (negative factor, NaN...)."""


class BoundsError(QcnmfError, IndexError):
    """An index is out of range."""


class ConfigError(QcnmfError, ValueError):
    """Invalid configuration or schedule."""


class CapacityError(QcnmfError):
    """Problem too large for the requested solver."""


class ParseError(QcnmfError, ValueError):
    """Malformed input file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
