"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class GeometryError(Exception):
    """Base class for every error raised by spheraffine."""


class ExprSyntaxError(GeometryError, ValueError):
    """Malformed expression text.

    ``offset`` is the 0-based byte offset of the offending token and
    ``expected`` the set of token kinds that would have been accepted there.
    """

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset(), source: str = ""):
        self.offset = offset
        self.expected = frozenset(expected)
        self.source = source
        detail = message
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(f"at offset {offset}: {detail}")


class UnknownIdentifier(ExprSyntaxError):
    def __init__(self, name: str, offset: int, source: str = ""):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", offset, source=source)


class DomainError(GeometryError, ArithmeticError):
    """Evaluation left the domain of a sub-expression (log/sqrt/division/pow)."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        where = f" at offset {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class SingularMetric(GeometryError):
    pass


class DegenerateTetrad(GeometryError):
    pass


class SingularJacobian(GeometryError):
    pass


class NotStationary(GeometryError):
    pass


class NoConvergence(GeometryError):
    pass


class AxisCrossing(GeometryError):
    pass


class SpecError(GeometryError, ValueError):
    """Invalid geometry spec document (unknown field, wrong kind, bad type)."""
