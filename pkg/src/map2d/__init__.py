"""Random room-and-corridor occupancy maps with BFS/A* characterization."""

from .dataset import (
    DatasetManifest,
    MapRecord,
    ValidationReport,
    characterize,
    decode_png,
    encode_png,
    generate_dataset,
    parse_dataset_csv,
    validate_dataset,
    write_dataset_csv,
)
from .errors import (
    InvalidParameterError,
    InvalidQueryError,
    Map2DError,
    PngFormatError,
    RenderError,
    SchemaError,
)
from .grid import (
    FREE,
    OCCUPIED,
    GenParams,
    GridMap,
    MapLayout,
    Room,
    carve_corridor,
    carve_room,
    generate_map,
    new_grid,
    sample_map_layout,
)
from .rng import SplitMix64, derive_map_state
from .search import (
    Algo,
    PathResult,
    SearchOutcome,
    astar_shortest_path,
    bfs_shortest_path,
    chain_path,
    connection_matrix,
)

__version__ = "0.1.0"
