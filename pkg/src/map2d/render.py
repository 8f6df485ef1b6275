"""Colour overlays of recorded paths on a map image."""

from __future__ import annotations

import io
from enum import Enum

import numpy as np
from PIL import Image

from .dataset import MapRecord, decode_png
from .errors import RenderError
from .grid import OCCUPIED, GridMap

DEFAULT_PALETTE = {
    "free": (0, 0, 0),
    "occupied": (255, 255, 255),
    "bfs": (0, 255, 0),
    "astar": (102, 178, 255),
    "seed": (255, 0, 0),
}


class Which(str, Enum):
    BFS = "bfs"
    ASTAR = "astar"
    BOTH = "both"


def render_rgb(grid: GridMap, record: MapRecord, which: Which | str = Which.BOTH,
               palette: dict | None = None) -> np.ndarray:
    """``rows x cols x 3`` uint8 image: BFS path, then A* path on top, then seeds."""
    colours = {**DEFAULT_PALETTE, **(palette or {})}
    which = Which(which)
    img = np.empty(grid.shape + (3,), dtype=np.uint8)
    img[...] = colours["free"]
    img[grid.cells == OCCUPIED] = colours["occupied"]

    layers = []
    if which in (Which.BFS, Which.BOTH):
        layers.append(("bfs", record.bfs_path_rows, record.bfs_path_cols))
    if which in (Which.ASTAR, Which.BOTH):
        layers.append(("astar", record.astar_path_rows, record.astar_path_cols))
    for name, rows, cols in layers:
        for r, c in zip(rows, cols):
            if not grid.is_free((r, c)):
                raise RenderError(f"{record.label}: {name} path cell {(r, c)} is not free on this map")
            img[r, c] = colours[name]
    for r, c in record.seeds:
        if not grid.in_bounds((r, c)):
            raise RenderError(f"{record.label}: seed {(r, c)} is outside the map")
        img[r, c] = colours["seed"]
    return img


def render_map(map_png: bytes, record: MapRecord, which: Which | str = Which.BOTH,
               palette: dict | None = None) -> bytes:
    """RGB PNG of ``map_png`` with the record's paths and seeds drawn in."""
    img = render_rgb(decode_png(map_png), record, which, palette)
    buf = io.BytesIO()
    Image.fromarray(img, mode="RGB").save(buf, format="PNG")
    return buf.getvalue()
