"""Breadth-first and A* search over free cells with 4-connectivity.

The inner loops are numba kernels working on flat cell indices; the public
functions validate queries and convert between ``(row, col)`` tuples and
flat indices.

An *expansion* is one node taken off the frontier and expanded. Both searches
stop as soon as the goal is taken off the frontier, so the goal itself counts.
Neighbours are always generated up, down, left, right.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numba
import numpy as np

from .errors import InvalidQueryError
from .grid import Cell, GridMap

_DR = np.array([-1, 1, 0, 0], dtype=np.int64)
_DC = np.array([0, 0, -1, 1], dtype=np.int64)


class Algo(str, Enum):
    BFS = "bfs"
    ASTAR = "astar"


@numba.njit(cache=True)
def _trace(parent, goal):
    n = 1
    u = goal
    while parent[u] != -1:
        u = parent[u]
        n += 1
    out = np.empty(n, dtype=np.int64)
    u = goal
    for i in range(n - 1, -1, -1):
        out[i] = u
        u = parent[u]
    return out


@numba.njit(cache=True)
def _bfs_kernel(cells, start, goal, dr, dc):
    rows, cols = cells.shape
    flat = cells.ravel()
    parent = np.full(rows * cols, -1, dtype=np.int64)
    seen = np.zeros(rows * cols, dtype=np.uint8)
    queue = np.empty(rows * cols, dtype=np.int64)
    queue[0] = start
    seen[start] = 1
    head, tail = 0, 1
    expansions = 0
    while head < tail:
        u = queue[head]
        head += 1
        expansions += 1
        if u == goal:
            return expansions, _trace(parent, goal)
        r = u // cols
        c = u - r * cols
        for k in range(4):
            nr = r + dr[k]
            nc = c + dc[k]
            if nr < 0 or nr >= rows or nc < 0 or nc >= cols:
                continue
            v = nr * cols + nc
            if flat[v] != 0 or seen[v]:
                continue
            seen[v] = 1
            parent[v] = u
            queue[tail] = v
            tail += 1
    return expansions, np.empty(0, dtype=np.int64)


@numba.njit(cache=True)
def _bfs_distances_kernel(cells, start, dr, dc):
    rows, cols = cells.shape
    flat = cells.ravel()
    dist = np.full(rows * cols, -1, dtype=np.int64)
    queue = np.empty(rows * cols, dtype=np.int64)
    queue[0] = start
    dist[start] = 0
    head, tail = 0, 1
    while head < tail:
        u = queue[head]
        head += 1
        r = u // cols
        c = u - r * cols
        for k in range(4):
            nr = r + dr[k]
            nc = c + dc[k]
            if nr < 0 or nr >= rows or nc < 0 or nc >= cols:
                continue
            v = nr * cols + nc
            if flat[v] != 0 or dist[v] != -1:
                continue
            dist[v] = dist[u] + 1
            queue[tail] = v
            tail += 1
    return dist


@numba.njit(cache=True)
def _astar_kernel(cells, start, goal, dr, dc):
    rows, cols = cells.shape
    flat = cells.ravel()
    n = rows * cols
    gr = goal // cols
    gc = goal - gr * cols
    best = np.full(n, n + 1, dtype=np.int64)
    parent = np.full(n, -1, dtype=np.int64)
    closed = np.zeros(n, dtype=np.uint8)
    sr = start // cols
    h0 = abs(sr - gr) + abs(start - sr * cols - gc)
    best[start] = 0
    # heap key: (f, h, insertion counter, node); lower h breaks f ties, then FIFO
    heap = [(h0, h0, np.int64(0), start)]
    counter = 0
    expansions = 0
    while len(heap) > 0:
        _, _, _, u = heapq.heappop(heap)
        if closed[u]:
            continue
        closed[u] = 1
        expansions += 1
        if u == goal:
            return expansions, _trace(parent, goal)
        r = u // cols
        c = u - r * cols
        g = best[u] + 1
        for k in range(4):
            nr = r + dr[k]
            nc = c + dc[k]
            if nr < 0 or nr >= rows or nc < 0 or nc >= cols:
                continue
            v = nr * cols + nc
            if flat[v] != 0 or closed[v] or g >= best[v]:
                continue
            best[v] = g
            parent[v] = u
            h = abs(nr - gr) + abs(nc - gc)
            counter += 1
            heapq.heappush(heap, (g + h, h, np.int64(counter), v))
    return expansions, np.empty(0, dtype=np.int64)


@dataclass
class SearchOutcome:
    """Result of one start-to-goal query; ``path`` is None when unreachable."""

    path: list[Cell] | None
    expansions: int

    @property
    def found(self) -> bool:
        return self.path is not None

    @property
    def moves(self) -> int:
        """Number of unit steps, or -1 when no path exists."""
        return len(self.path) - 1 if self.path is not None else -1


@dataclass
class PathResult:
    """A route through a sequence of waypoints, stored as parallel row/col lists."""

    path_rows: list[int] = field(default_factory=list)
    path_cols: list[int] = field(default_factory=list)
    total_expansions: int = 0
    segment_ok: list[bool] = field(default_factory=list)

    @property
    def cells(self) -> list[Cell]:
        return list(zip(self.path_rows, self.path_cols))


def _flat_index(grid: GridMap, cell: Cell, what: str) -> int:
    try:
        r, c = (int(v) for v in cell)
    except (TypeError, ValueError):
        raise InvalidQueryError(f"{what} must be a (row, col) pair, got {cell!r}") from None
    if not grid.in_bounds((r, c)):
        raise InvalidQueryError(f"{what} {(r, c)} is outside the {grid.rows}x{grid.cols} grid")
    if grid.cells[r, c] != 0:
        raise InvalidQueryError(f"{what} {(r, c)} is occupied")
    return r * grid.cols + c


def _outcome(grid: GridMap, expansions: int, flat_path: np.ndarray) -> SearchOutcome:
    if flat_path.size == 0:
        return SearchOutcome(None, int(expansions))
    rows, cols = np.divmod(flat_path, grid.cols)
    return SearchOutcome(list(zip(rows.tolist(), cols.tolist())), int(expansions))


def bfs_shortest_path(grid: GridMap, start: Cell, goal: Cell) -> SearchOutcome:
    """Minimal-move path by breadth-first search (FIFO order, fixed neighbour order)."""
    s = _flat_index(grid, start, "start")
    g = _flat_index(grid, goal, "goal")
    return _outcome(grid, *_bfs_kernel(grid.cells, s, g, _DR, _DC))


def astar_shortest_path(grid: GridMap, start: Cell, goal: Cell) -> SearchOutcome:
    """Minimal-move path by A* with the Manhattan heuristic.

    Equal ``f`` values are broken by lower heuristic first, then by insertion
    order. Stale heap entries for already-closed cells are dropped without
    counting as expansions.
    """
    s = _flat_index(grid, start, "start")
    g = _flat_index(grid, goal, "goal")
    return _outcome(grid, *_astar_kernel(grid.cells, s, g, _DR, _DC))


_SEARCHES = {Algo.BFS: bfs_shortest_path, Algo.ASTAR: astar_shortest_path}


def chain_path(grid: GridMap, waypoints: Sequence[Cell], algo: Algo | str = Algo.BFS) -> PathResult:
    """Route through ``waypoints`` in order, one independent search per consecutive pair.

    A failed pair does not abort the chain. Successful segments are joined,
    dropping a segment's first cell when it repeats the cell the route already
    ends on. Expansions of every attempted segment are summed.
    """
    if len(waypoints) < 2:
        raise InvalidQueryError(f"chain_path needs at least 2 waypoints, got {len(waypoints)}")
    search = _SEARCHES[Algo(algo)]
    result = PathResult()
    route: list[Cell] = []
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        out = search(grid, a, b)
        result.total_expansions += out.expansions
        result.segment_ok.append(out.found)
        if not out.found:
            continue
        seg = out.path
        if route and route[-1] == seg[0]:
            seg = seg[1:]
        route.extend(seg)
    result.path_rows = [r for r, _ in route]
    result.path_cols = [c for _, c in route]
    return result


def connection_matrix(grid: GridMap, seeds: Sequence[Cell], algo: Algo | str = Algo.BFS) -> np.ndarray:
    """Seed-to-seed move counts as an ``n x n`` int64 matrix, -1 where unreachable.

    The BFS variant floods once per seed; the A* variant runs one query per
    unordered pair and mirrors it.
    """
    algo = Algo(algo)
    flat = [_flat_index(grid, s, "seed") for s in seeds]
    n = len(flat)
    out = np.zeros((n, n), dtype=np.int64)
    if algo is Algo.BFS:
        for i, s in enumerate(flat):
            dist = _bfs_distances_kernel(grid.cells, s, _DR, _DC)
            out[i] = dist[flat]
        return out
    for i in range(n):
        for j in range(i + 1, n):
            _, path = _astar_kernel(grid.cells, flat[i], flat[j], _DR, _DC)
            out[i, j] = out[j, i] = path.size - 1
    return out
