"""Exception types shared across the package."""


class LpmatchError(Exception):
    """Base class for every error raised by this package."""


class InvalidValue(LpmatchError):
    """A numeric or structural input is out of its allowed domain."""


class UnitMismatch(LpmatchError):
    """Two profiles (or a profile and a table) carry different units."""


class ReferenceMismatch(LpmatchError):
    """Two profiles do not cover the same set of reference names."""


class UnsupportedConversion(LpmatchError):
    """Requested a unit conversion outside jornadas -> {km, hours}."""


class EmptyName(LpmatchError):
    """A candidate or reference name is empty or blank."""


class ParseError(LpmatchError):
    """Malformed tabular input; carries the offending line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class DuplicateCandidate(LpmatchError):
    """Two table rows name the same candidate after normalization."""


class EmptyInput(LpmatchError):
    """A table source contains no candidate rows."""


class ReferenceNotFound(LpmatchError):
    """A requested reference name is not a column of the table."""


class EmptySelection(LpmatchError):
    """A reference subset selection would leave no columns."""


class DegenerateTarget(LpmatchError):
    """The target profile has zero magnitude, so relative error is undefined."""


class InsufficientCandidates(LpmatchError):
    """An operation needs at least two ranked candidates."""
