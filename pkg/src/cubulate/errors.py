"""Exception types shared across the package."""


class CubulateError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateVertexInCell(CubulateError):
    pass


class NotACellComplex(CubulateError):
    pass


class UnknownCell(CubulateError, KeyError):
    pass


class UnknownVertex(UnknownCell):
    pass


class NotASubcomplex(CubulateError):
    pass


class MissingLabel(CubulateError):
    pass


class NotFoldable(CubulateError):
    """No folding exists.

    ``cycle`` is a closed edge loop (or a cycle of edge parallel classes)
    obstructing every folding, when one could be isolated; ``cubes`` lists
    the cubes around the vertex where the search failed otherwise.
    """

    def __init__(self, message, cycle=None, cubes=None, kind=None):
        super().__init__(message)
        self.cycle = cycle
        self.cubes = cubes
        self.kind = kind


class InvalidFolding(CubulateError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class IntervalNotBoolean(UserWarning):
    """A codimension-k poset interval is not Boolean; no cube was filled."""


class ForeignMirror(CubulateError):
    pass


class NotATile(CubulateError):
    pass


class NotACover(CubulateError):
    pass


class ProjectionUndefined(CubulateError):
    pass


class SearchExhausted(CubulateError):
    """A loop could not be reduced within the configured search bound."""

    def __init__(self, message, loop=None):
        super().__init__(message)
        self.loop = loop


class Disconnected(CubulateError):
    pass


class RelatorNotKilled(CubulateError):
    def __init__(self, message, relator=None):
        super().__init__(message)
        self.relator = relator


class NotTransitive(CubulateError):
    pass


class ActionNotStructurePreserving(CubulateError):
    pass


class ParseError(CubulateError):
    def __init__(self, message, line=None, column=None):
        loc = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(loc + message)
        self.line = line
        self.column = column
