"""Exception types raised across the package."""


class Map2DError(Exception):
    """Base class for every error raised by map2d."""


class InvalidParameterError(Map2DError, ValueError):
    """A generation parameter or grid dimension is out of its allowed domain."""


class InvalidQueryError(Map2DError, ValueError):
    """A search query names a cell that is out of bounds or occupied."""


class PngFormatError(Map2DError, ValueError):
    """Bytes could not be decoded as a grayscale occupancy image."""


class SchemaError(Map2DError, ValueError):
    """A dataset CSV does not follow the record schema."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.row = row
        self.column = column


class RenderError(Map2DError, ValueError):
    """A record's paths do not fit the map it is drawn on."""
