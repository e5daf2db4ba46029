"""Exception types shared across the package.

The CLI maps these onto exit codes: parse/usage problems exit with 2,
capacity overruns with 3, everything else that signals "false/blocked"
with 1.
"""


class RelknotError(Exception):
    """Base class for all package errors."""


class UnknownElementError(RelknotError):
    """A name was looked up that is not in the element/arc/component set."""


class ParseError(RelknotError):
    """Malformed input text (term syntax, .rel/.alg/.pd files)."""

    def __init__(self, message, line=None, column=None, source=None):
        self.line = line
        self.column = column
        self.source = source
        loc = ""
        if source is not None:
            loc += f"{source}:"
        if line is not None:
            loc += f"{line}:"
        if column is not None:
            loc += f"{column}:"
        super().__init__(f"{loc} {message}" if loc else message)


class CapacityError(RelknotError):
    """A computation would exceed a hard size cap (e.g. truth-table width)."""


class PartialityError(RelknotError):
    """A partial operation was applied outside its domain."""


class AxiomError(RelknotError):
    """A structure fails axioms required by the requested construction."""


class ArgumentError(RelknotError):
    """An operation was called with arguments outside its contract."""


class MoveError(RelknotError):
    """A Reidemeister move is not applicable or not permitted."""
