"""Exception hierarchy shared by every oodir module."""

from __future__ import annotations


class OodirError(Exception):
    """Base class for all errors raised by oodir."""


class DomainError(OodirError, ValueError):
    """A parameter lies outside the mathematical domain of an operation."""


class ShapeError(OodirError, ValueError):
    """Array dimensions disagree with each other or with their coordinates."""


class InvalidCoordinatesError(OodirError, ValueError):
    """Coordinates violate ordering, range or presence requirements."""


class DimensionNotApplicableError(OodirError, ValueError):
    """A coercion was requested along a dimension that has no samples."""


class FrequencyRangeError(OodirError, ValueError):
    """A frequency falls outside the declared range of a continuous model."""


class FormatError(OodirError, ValueError):
    """Rejected input document.

    Parameters
    ----------
    message : str
        Human readable description.
    location : str, optional
        Where the problem was found, e.g. ``"line 3, column 7"`` or
        ``"values[1][2]"``.
    """

    category = "format"

    def __init__(self, message: str, location: str | None = None):
        self.message = message
        self.location = location
        where = f" at {location}" if location else ""
        super().__init__(f"{self.category} error{where}: {message}")


class DocumentSyntaxError(FormatError):
    category = "syntax"


class SchemaError(FormatError):
    category = "schema"


class VersionError(FormatError):
    category = "version"


class DocumentShapeError(FormatError, ShapeError):
    category = "shape"


class OrderError(FormatError):
    category = "order"


class AngleRangeError(FormatError):
    category = "range"


class NonGridError(FormatError):
    category = "non-grid"


class DuplicateCellError(FormatError):
    category = "duplicate"


class NothingToRenderError(OodirError, ValueError):
    """A plot or table was requested for an empty sample set."""
