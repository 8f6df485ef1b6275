"""
BFS versus A* on generated maps
===============================

Both searches return shortest paths on the 4-connected grid, so their move
counts always agree. They differ in how much of the map they expand.
"""

# %%
import numpy as np

from map2d import GenParams, SplitMix64, astar_shortest_path, bfs_shortest_path, generate_map
from map2d.oracle import oracle_all_pairs

params = GenParams()
rows = []
for state in range(300):
    grid, layout = generate_map(params, SplitMix64(state))
    for s, t in zip(layout.seeds, layout.seeds[1:]):
        b = bfs_shortest_path(grid, s, t)
        a = astar_shortest_path(grid, s, t)
        assert a.moves == b.moves
        if b.found:
            rows.append((b.moves, b.expansions, a.expansions))

moves, bfs_exp, astar_exp = np.array(rows).T
print(f"{len(rows)} solvable segments")
print(f"mean moves          {moves.mean():8.1f}")
print(f"mean BFS expansions {bfs_exp.mean():8.1f}")
print(f"mean A* expansions  {astar_exp.mean():8.1f}")
print(f"A* expands no more than BFS on {np.mean(astar_exp <= bfs_exp):.1%} of segments")

# %%
# Cross-check one map against exhaustive Dijkstra.
grid, layout = generate_map(params, SplitMix64(12))
print(oracle_all_pairs(grid, layout.seeds))
