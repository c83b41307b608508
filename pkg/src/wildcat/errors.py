"""Exception hierarchy.

Every error carries a ``kind`` string (the name reported by the CLI) and an
optional source position.
"""

from __future__ import annotations


class WildcatError(Exception):
    kind = "Error"

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    @property
    def positioned(self) -> bool:
        return self.line is not None and self.col is not None

    def __str__(self) -> str:
        if self.positioned:
            return f"{self.kind} at {self.line}:{self.col}: {self.message}"
        return f"{self.kind}: {self.message}"


class DslSyntaxError(WildcatError):
    kind = "SyntaxError"

    def __init__(self, message: str, line: int, col: int, expected: str = ""):
        super().__init__(message, line, col)
        self.expected = expected


class ValidationError(WildcatError):
    """Base for table/type validation failures (CLI exit code 2)."""


class DuplicateClass(ValidationError):
    kind = "DuplicateClass"


class UnknownClass(ValidationError):
    kind = "UnknownClass"


class ArityMismatch(ValidationError):
    kind = "ArityMismatch"


class CyclicSubclassing(ValidationError):
    kind = "CyclicSubclassing"


class IllFormedArgument(ValidationError):
    kind = "IllFormedArgument"


class NullHasNoErasure(WildcatError):
    kind = "NullHasNoErasure"


class ResourceLimit(WildcatError):
    kind = "ResourceLimit"


class UnsupportedBound(WildcatError):
    kind = "UnsupportedBound"


class UnsupportedTable(WildcatError):
    """Table lies outside the fragment the level-wise constructor handles."""

    kind = "UnsupportedTable"


class BaseMismatch(WildcatError):
    kind = "BaseMismatch"


class QuotientNotAntisymmetric(WildcatError):
    kind = "QuotientNotAntisymmetric"


class CapExceededWarning(UserWarning):
    """A hom-set enumeration hit its path cap, so results depend on the cap."""
