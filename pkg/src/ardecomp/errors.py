"""Exception hierarchy shared by all solvers.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented status codes without inspecting messages.
"""


class DecompError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class DimensionError(DecompError, ValueError):
    """Shapes or dimension vectors do not fit together."""


class DomainError(DecompError, ValueError):
    """An argument lies outside the domain of the operation."""


class SingularMatrixError(DecompError, ArithmeticError):
    """A matrix that must be invertible is singular."""


class StabilityError(DecompError, ValueError):
    """A subspace family is not closed under the arrow maps."""

    def __init__(self, message, arrow=None):
        super().__init__(message)
        self.arrow = arrow


class InvalidMeshError(DecompError, ValueError):
    """Mesh data does not behave like an almost split sequence."""


class CoverageError(DecompError):
    """The candidate set missed summands; ``deficit`` is the missing dimension vector."""

    def __init__(self, message, deficit):
        super().__init__(message)
        self.deficit = tuple(deficit)


class ConsistencyError(DecompError):
    """An internal bookkeeping identity failed (dimension conservation etc.)."""


class InvalidRegularPartError(DecompError):
    """The regular part handed to the parameter finder has a singular alpha map."""


class NonSplitError(DecompError):
    """Raised only when the caller demands a split characteristic polynomial."""

    exit_code = 4

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class ParseError(DecompError, ValueError):
    """Malformed input document."""

    exit_code = 2

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column
