"""Exception hierarchy shared across the package.

Validation failures carry enough structure to report every offending
edge pair / triple; bounded checkers raise InsufficientDepth rather than
guessing undetermined data.
"""

from __future__ import annotations


class KGraphError(Exception):
    """Base class for all library errors."""


class DegreeOutOfRangeError(KGraphError):
    """Degree arithmetic left N^k (underflow) or violated a precondition."""


class MalformedSquareError(KGraphError):
    """A declared square breaks the color/endpoint shape constraints."""


class IncompleteSquaresError(KGraphError):
    """Some composable two-color edge pair is covered by != 1 square."""

    def __init__(self, missing_asc, missing_desc, duplicated):
        self.missing_asc = tuple(missing_asc)
        self.missing_desc = tuple(missing_desc)
        self.duplicated = tuple(duplicated)
        super().__init__(
            "incomplete factorization squares: "
            f"missing asc={list(self.missing_asc)} "
            f"missing desc={list(self.missing_desc)} "
            f"duplicated={list(self.duplicated)}"
        )


class NonAssociativeError(KGraphError):
    """Two resolution orders of a three-color cube disagree."""

    def __init__(self, triples):
        self.triples = tuple(triples)
        super().__init__(f"non-associative square data on edge triples {list(self.triples)}")


class NotComposableError(KGraphError):
    pass


class RangeMismatchError(KGraphError):
    pass


class NotAtVertexError(KGraphError):
    pass


class NotLocallyConvexError(KGraphError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"graph is not locally convex, witness edge pair {witness}")


class InsufficientDepthError(KGraphError):
    """The request needs data beyond the explored depth of a fragment."""


class DepthTooSmallError(KGraphError):
    pass


class PreconditionFailedError(KGraphError):
    pass


class NotSaturatedHereditaryError(KGraphError):
    pass


class TooLargeError(KGraphError):
    """An enumeration exceeded the configured morphism cap."""


class OutsideRegionError(KGraphError):
    """A desourced morphism/vertex falls outside the materialized box."""


class InternalInvariantError(KGraphError):
    """A theorem the implementation relies on failed at runtime."""


class KgParseError(KGraphError):
    """Base for .kg text format errors; carries a 1-based location."""

    def __init__(self, message: str, line: int, col: int, expected=()):
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        loc = f"line {line}:{col}"
        if self.expected:
            message = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(f"{loc}: {message}")


class KgSyntaxError(KgParseError):
    pass


class UnknownIdError(KgParseError):
    pass


class DuplicateIdError(KgParseError):
    pass


class BadColorError(KgParseError):
    pass
