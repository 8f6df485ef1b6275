"""Occupancy grids and the room-and-corridor map generator.

Cells hold ``OCCUPIED`` (1) or ``FREE`` (0). Coordinates are ``(row, col)``
with the origin in the upper-left corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidParameterError
from .rng import SplitMix64

FREE = 0
OCCUPIED = 1

# keeps a single grid below ~256 MiB of uint8 cells
MAX_CELLS = 1 << 28

Cell = tuple[int, int]


class GridMap:
    """Rectangular occupancy matrix backed by a ``uint8`` numpy array."""

    __slots__ = ("cells",)

    def __init__(self, cells: np.ndarray) -> None:
        cells = np.asarray(cells)
        if cells.ndim != 2 or cells.shape[0] < 1 or cells.shape[1] < 1:
            raise InvalidParameterError(f"grid must be a non-empty 2-D array, got shape {cells.shape}")
        if cells.size and not np.isin(cells, (FREE, OCCUPIED)).all():
            raise InvalidParameterError("grid cells must be 0 (free) or 1 (occupied)")
        self.cells = np.ascontiguousarray(cells, dtype=np.uint8)

    @classmethod
    def from_rows(cls, rows: Sequence[str | Sequence[int]]) -> "GridMap":
        """Build a grid from strings like ``"#.."`` (``#`` occupied) or int rows."""
        data = [
            [OCCUPIED if ch == "#" else FREE for ch in row] if isinstance(row, str) else list(row)
            for row in rows
        ]
        return cls(np.array(data, dtype=np.uint8))

    @property
    def rows(self) -> int:
        return self.cells.shape[0]

    @property
    def cols(self) -> int:
        return self.cells.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.cells.shape

    def in_bounds(self, cell: Cell) -> bool:
        r, c = cell
        return 0 <= r < self.rows and 0 <= c < self.cols

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and self.cells[cell[0], cell[1]] == FREE

    def free_count(self) -> int:
        return int(self.cells.size - np.count_nonzero(self.cells))

    def free_fraction(self) -> float:
        return self.free_count() / self.cells.size

    def free_cells(self) -> Iterator[Cell]:
        for r, c in zip(*np.nonzero(self.cells == FREE)):
            yield int(r), int(c)

    def copy(self) -> "GridMap":
        return GridMap(self.cells.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GridMap):
            return NotImplemented
        return self.cells.shape == other.cells.shape and bool(np.array_equal(self.cells, other.cells))

    def __repr__(self) -> str:
        return f"GridMap({self.rows}x{self.cols}, free={self.free_count()})"

    def __str__(self) -> str:
        return "\n".join("".join("#" if v else "." for v in row) for row in self.cells)


def new_grid(rows: int, cols: int) -> GridMap:
    """An all-occupied grid of the given size."""
    if not (isinstance(rows, (int, np.integer)) and isinstance(cols, (int, np.integer))):
        raise InvalidParameterError("grid dimensions must be integers")
    if rows < 1 or cols < 1:
        raise InvalidParameterError(f"grid dimensions must be positive, got {rows}x{cols}")
    if rows * cols > MAX_CELLS:
        raise InvalidParameterError(f"grid of {rows}x{cols} cells exceeds the {MAX_CELLS} cell limit")
    return GridMap(np.ones((rows, cols), dtype=np.uint8))


def _as_range(value, name: str, floor: int) -> tuple[int, int]:
    if isinstance(value, (int, np.integer)):
        value = (value, value)
    try:
        lo, hi = (int(v) for v in value)
    except (TypeError, ValueError):
        raise InvalidParameterError(f"{name} must be an integer or a (min, max) pair, got {value!r}") from None
    if lo > hi:
        raise InvalidParameterError(f"{name} is inverted: {lo} > {hi}")
    if lo < floor:
        raise InvalidParameterError(f"{name} minimum must be at least {floor}, got {lo}")
    return lo, hi


def _as_fraction(value) -> Fraction:
    if isinstance(value, float):
        # repr round-trips, so 0.1 becomes exactly 1/10 rather than its binary expansion
        return Fraction(repr(value))
    return Fraction(value)


@dataclass(frozen=True)
class GenParams:
    """Generation ranges. All ranges are inclusive ``(min, max)`` pairs.

    Defaults reproduce the published 64x64 dataset settings.
    """

    rows: int = 64
    cols: int = 64
    room_count_range: tuple[int, int] = (2, 9)
    room_rows_range: tuple[int, int] = (14, 33)
    room_cols_range: tuple[int, int] = (14, 33)
    tunnel_range: tuple[int, int] = (7, 15)
    skip_probability: Fraction = Fraction(1, 10)
    resolution: float = 0.1

    def __post_init__(self) -> None:
        set_ = object.__setattr__
        for name in ("rows", "cols"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise InvalidParameterError(f"{name} must be a positive integer, got {v!r}")
            set_(self, name, int(v))
        if self.rows * self.cols > MAX_CELLS:
            raise InvalidParameterError(f"map of {self.rows}x{self.cols} exceeds the {MAX_CELLS} cell limit")
        set_(self, "room_count_range", _as_range(self.room_count_range, "room_count_range", 2))
        set_(self, "room_rows_range", _as_range(self.room_rows_range, "room_rows_range", 1))
        set_(self, "room_cols_range", _as_range(self.room_cols_range, "room_cols_range", 1))
        set_(self, "tunnel_range", _as_range(self.tunnel_range, "tunnel_range", 1))
        try:
            p = _as_fraction(self.skip_probability)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"skip_probability must be a number, got {self.skip_probability!r}") from None
        if not 0 <= p < 1:
            raise InvalidParameterError(f"skip_probability must lie in [0, 1), got {p}")
        set_(self, "skip_probability", p)
        try:
            res = float(self.resolution)
        except (TypeError, ValueError):
            raise InvalidParameterError(f"resolution must be a number, got {self.resolution!r}") from None
        if not res > 0 or res == float("inf"):
            raise InvalidParameterError(f"resolution must be positive and finite, got {self.resolution!r}")
        set_(self, "resolution", res)


@dataclass(frozen=True)
class Room:
    seed_row: int
    seed_col: int
    size_rows: int
    size_cols: int

    @property
    def seed(self) -> Cell:
        return (self.seed_row, self.seed_col)


@dataclass
class MapLayout:
    """The random draws that fully determine one map."""

    tunnel_width: int
    rooms: list[Room]
    connected: list[bool]
    # one entry per consecutive pair; None where the pair was left unconnected
    directions: list[int | None] = field(default_factory=list)

    @property
    def n_rooms(self) -> int:
        return len(self.rooms)

    @property
    def seeds(self) -> list[Cell]:
        return [room.seed for room in self.rooms]


def sample_map_layout(params: GenParams, rng: SplitMix64) -> MapLayout:
    """Draw every random quantity of one map, in a fixed order.

    Order: room count, tunnel width, then per room (seed row, seed col, size
    rows, size cols), then per consecutive pair a connect token and, only if
    the pair gets connected, a corridor direction.

    The connect token is uniform on ``[0, d)`` for ``skip_probability = k/d``
    and the pair is skipped when ``1 <= token <= k``; with the default 1/10
    that is a ten-valued token skipped exactly when it equals 1.
    """
    n = rng.randint(*params.room_count_range)
    tunnel = rng.randint(*params.tunnel_range)
    rooms = []
    for _ in range(n):
        seed_row = rng.randint(0, params.rows - 1)
        seed_col = rng.randint(0, params.cols - 1)
        size_rows = rng.randint(*params.room_rows_range)
        size_cols = rng.randint(*params.room_cols_range)
        rooms.append(Room(seed_row, seed_col, size_rows, size_cols))

    skip = params.skip_probability
    connected: list[bool] = []
    directions: list[int | None] = []
    for _ in range(n - 1):
        token = rng.randint(0, skip.denominator - 1)
        linked = not (1 <= token <= skip.numerator)
        connected.append(linked)
        directions.append(rng.randint(0, 1) if linked else None)
    return MapLayout(tunnel_width=tunnel, rooms=rooms, connected=connected, directions=directions)


def _span(start: int, length: int, limit: int) -> slice:
    return slice(max(start, 0), min(start + length, limit))


def carve_room(grid: GridMap, room: Room) -> None:
    """Free the room's rectangle, floor-centred on its seed and clipped to the grid."""
    if not grid.in_bounds(room.seed):
        raise InvalidParameterError(f"room seed {room.seed} lies outside a {grid.rows}x{grid.cols} grid")
    top = room.seed_row - room.size_rows // 2
    left = room.seed_col - room.size_cols // 2
    grid.cells[_span(top, room.size_rows, grid.rows), _span(left, room.size_cols, grid.cols)] = FREE


def carve_corridor(grid: GridMap, a: Cell, b: Cell, width: int, direction: int) -> None:
    """Free an L-shaped corridor of the given width between cells ``a`` and ``b``.

    Direction 1 runs a vertical band through ``a``'s column then a horizontal
    band through ``b``'s row; direction 0 is the mirror image (horizontal at
    ``a``'s row, vertical at ``b``'s column). Long-axis spans include both
    endpoints, so the two bands always share the elbow.
    """
    if not (grid.in_bounds(a) and grid.in_bounds(b)):
        raise InvalidParameterError(f"corridor endpoints {a}, {b} must lie inside the grid")
    if width < 1:
        raise InvalidParameterError(f"corridor width must be at least 1, got {width}")
    if direction not in (0, 1):
        raise InvalidParameterError(f"direction must be 0 or 1, got {direction!r}")
    (ar, ac), (br, bc) = a, b
    half = width // 2
    row_span = slice(min(ar, br), max(ar, br) + 1)
    col_span = slice(min(ac, bc), max(ac, bc) + 1)
    if direction == 1:
        grid.cells[row_span, _span(ac - half, width, grid.cols)] = FREE
        grid.cells[_span(br - half, width, grid.rows), col_span] = FREE
    else:
        grid.cells[_span(ar - half, width, grid.rows), col_span] = FREE
        grid.cells[row_span, _span(bc - half, width, grid.cols)] = FREE


def build_grid(params: GenParams, layout: MapLayout) -> GridMap:
    """Carve a layout into a fresh grid: all rooms first, then corridors in pair order."""
    grid = new_grid(params.rows, params.cols)
    for room in layout.rooms:
        carve_room(grid, room)
    for q, linked in enumerate(layout.connected):
        if linked:
            carve_corridor(grid, layout.rooms[q].seed, layout.rooms[q + 1].seed,
                           layout.tunnel_width, layout.directions[q])
    return grid


def generate_map(params: GenParams, rng: SplitMix64) -> tuple[GridMap, MapLayout]:
    layout = sample_map_layout(params, rng)
    return build_grid(params, layout), layout
