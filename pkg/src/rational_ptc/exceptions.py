"""
Error types.

Every error raised on purpose by the package derives from ``PtcError``,
which is a ``ValueError`` so callers that only know about bad values keep
working. ``InputError`` covers unreadable models; ``MathematicalError``
covers presentations and requests that are well formed but mathematically
inadmissible.
"""

from typing import Optional


class PtcError(ValueError):
    """Base class of all package errors."""


class InputError(PtcError):
    """A model file or expression could not be read."""


class MathematicalError(PtcError):
    """A mathematical precondition failed."""


class InconsistentResult(PtcError):
    """Two computations that must agree did not."""


class ParseError(InputError):
    """Syntax error in a model file or polynomial expression."""

    def __init__(self, reason: str, line: Optional[int] = None):
        self.reason = reason
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{reason}")


# exact-linalg


class DimensionMismatch(MathematicalError):
    """A vector does not live in the ambient space it was used with."""


class NotSubspace(MathematicalError):
    """The claimed subspace is not contained in the ambient subspace."""


# graded-core


class WrongDegree(MathematicalError):
    """A polynomial is not homogeneous of the requested degree."""

    def __init__(self, expected: int, found: Optional[int]):
        self.expected = expected
        self.found = found
        shown = "mixed" if found is None else str(found)
        super().__init__(f"Expected a homogeneous element of degree {expected}, got degree {shown}")


# cdga-engine


class ValidationError(MathematicalError):
    """A presentation violates the CDGA axioms."""

    def __init__(self, message: str, generator: Optional[str] = None, line: Optional[int] = None):
        self.generator = generator
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class DegreeMismatch(ValidationError):
    """A differential image has the wrong degree."""

    def __init__(self, generator: str, expected: int, found: Optional[int], line: Optional[int] = None):
        self.expected = expected
        self.found = found
        shown = "mixed" if found is None else str(found)
        super().__init__(
            f"d({generator}) must be homogeneous of degree {expected}, got {shown}",
            generator=generator,
            line=line,
        )


class LeibnizSquareNonzero(ValidationError):
    """d(d(g)) is not zero for some generator g."""

    def __init__(self, generator: str, residue: str, line: Optional[int] = None):
        self.residue = residue
        super().__init__(
            f"d(d({generator})) = {residue} is not zero",
            generator=generator,
            line=line,
        )


class NotValidated(MathematicalError):
    """An operation requiring a validated presentation got a raw one."""


class NotRelativeSullivan(ValidationError):
    """No nilpotence ordering exists for the fiber generators."""


class NotACocycle(MathematicalError):
    """A class coordinate was requested for an element that is not closed."""


# fibration-models


class SplitInvalid(MathematicalError):
    """An odd-degree extension split violates one of its conditions."""

    def __init__(self, condition: str, detail: str):
        self.condition = condition
        super().__init__(f"Extension split invalid ({condition}): {detail}")


class WindowTooSmall(MathematicalError):
    """A degree slice outside the computed window was needed."""


# invariants


class NotOddFiber(MathematicalError):
    """The fiber has generators of even degree."""


class MissingDimension(MathematicalError):
    """A formal dimension is neither computable nor declared."""


# genfun


class NoFit(MathematicalError):
    """The coefficient window is not eventually arithmetic."""
