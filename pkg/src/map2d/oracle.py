"""Slow, obviously-correct reference distances for testing the searches."""

from __future__ import annotations

import heapq
from typing import Sequence

import numpy as np

from .grid import Cell, GridMap


def _dijkstra(grid: GridMap, source: Cell) -> dict[Cell, int]:
    # textbook Dijkstra on the free-cell graph: no heuristic, no early exit
    free = {cell for cell in grid.free_cells()}
    dist = {source: 0}
    heap = [(0, source)]
    done: set[Cell] = set()
    while heap:
        d, (r, c) = heapq.heappop(heap)
        if (r, c) in done:
            continue
        done.add((r, c))
        for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
            if nb in free and d + 1 < dist.get(nb, float("inf")):
                dist[nb] = d + 1
                heapq.heappush(heap, (d + 1, nb))
    return dist


def oracle_all_pairs(grid: GridMap, seeds: Sequence[Cell]) -> np.ndarray:
    """Seed-to-seed distances (-1 if unreachable) by exhaustive Dijkstra."""
    seeds = [tuple(int(v) for v in s) for s in seeds]
    n = len(seeds)
    out = np.full((n, n), -1, dtype=np.int64)
    for i, s in enumerate(seeds):
        dist = _dijkstra(grid, s)
        for j, t in enumerate(seeds):
            out[i, j] = dist.get(t, -1)
    return out


def component_labels(grid: GridMap) -> np.ndarray:
    """Label 4-connected free components (0 for occupied cells) by flood fill."""
    labels = np.zeros(grid.shape, dtype=np.int64)
    current = 0
    for cell in grid.free_cells():
        if labels[cell]:
            continue
        current += 1
        stack = [cell]
        labels[cell] = current
        while stack:
            r, c = stack.pop()
            for nb in ((r + 1, c), (r - 1, c), (r, c + 1), (r, c - 1)):
                if grid.is_free(nb) and not labels[nb]:
                    labels[nb] = current
                    stack.append(nb)
    return labels
