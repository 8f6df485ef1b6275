"""
One map, start to finish
========================

Generate a single 64x64 room-and-corridor map, look at the random draws
behind it, route BFS and A* through its room seeds and save an overlay image.
"""

# %%
# Generation is a pure function of the parameters and a 64-bit RNG state.
from map2d import GenParams, SplitMix64, generate_map

params = GenParams()  # 64x64, 2-9 rooms, 14-33 px sides, 7-15 px corridors
grid, layout = generate_map(params, SplitMix64(497))

print(grid)
print(f"{layout.n_rooms} rooms, corridor width {layout.tunnel_width}")
for i, room in enumerate(layout.rooms):
    print(f"  room {i}: seed {room.seed}, {room.size_rows}x{room.size_cols}")
print("connected pairs:", layout.connected)
print(f"free fraction: {grid.free_fraction():.3f}")

# %%
# Chained paths visit the seeds in order; a pair left unconnected usually
# has no route and is skipped.
from map2d import chain_path, connection_matrix

for algo in ("bfs", "astar"):
    route = chain_path(grid, layout.seeds, algo)
    print(f"{algo:>5}: {len(route.path_rows)} cells, {route.total_expansions} expansions, "
          f"segments ok {route.segment_ok}")

# %%
# The connection matrix holds seed-to-seed move counts; -1 marks no connection.
print(connection_matrix(grid, layout.seeds, "astar"))

# %%
# Overlay: BFS green, A* light blue on top, seeds red.
from pathlib import Path

from map2d import encode_png
from map2d.dataset import make_record
from map2d.render import render_map

record = make_record(497, params, layout, grid)
out = Path("map_000497_paths.png")
out.write_bytes(render_map(encode_png(grid), record, "both"))
print(f"wrote {out}")

# %%
# With matplotlib installed, show it scaled up.
try:
    import matplotlib.pyplot as plt
    from map2d.render import render_rgb
except ImportError:
    pass
else:
    plt.imshow(render_rgb(grid, record), interpolation="nearest")
    plt.title("BFS (green) and A* (light blue) through the room seeds")
    plt.savefig("map_000497_paths_large.png", dpi=150)
