"""Exception hierarchy shared by every module."""

from __future__ import annotations


class TanakaError(Exception):
    """Base class for all library errors."""


class AmbientMismatch(TanakaError, ValueError):
    pass


class InvalidAlgebra(TanakaError, ValueError):
    """Raised when a structure fails grading or Jacobi validation."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotBracketGenerating(TanakaError):
    pass


class IncompatibleBrackets(TanakaError):
    pass


class NotADerivation(TanakaError):
    pass


class NotGradedSubalgebra(TanakaError):
    pass


class NontrivialIntersection(TanakaError):
    pass


class PrerequisiteViolated(TanakaError):
    pass


class PreconditionViolated(TanakaError):
    pass


class LambdaOutOfRange(TanakaError, ValueError):
    pass


class KappaTooSmall(TanakaError, ValueError):
    pass


class InternalInconsistency(TanakaError):
    """Two results that must agree do not; always a bug, never bad input."""
