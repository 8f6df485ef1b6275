import pytest

from map2d import GenParams, GridMap, SplitMix64, generate_map

ACCEPTANCE_LINES: list[str] = []

# 32x32 corpus settings: the published ranges halved
SMALL_PARAMS = GenParams(rows=32, cols=32, room_count_range=(2, 9), room_rows_range=(7, 16),
                         room_cols_range=(7, 16), tunnel_range=(3, 7))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def open3():
    return GridMap.from_rows(["...", "...", "..."])


def random_maps(params, count, base=0):
    """Deterministic corpus of generated maps."""
    return [generate_map(params, SplitMix64(base + i)) for i in range(count)]


def random_record(rng):
    """A schema-valid MapRecord with arbitrary contents, drawn from ``random.Random``."""
    from map2d import MapRecord

    n = rng.randint(1, 9)
    ints = lambda k: [rng.randint(0, 200) for _ in range(k)]
    connected = [rng.randint(0, 1) for _ in range(n - 1)]
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = m[j][i] = rng.randint(-1, 500)
    for q, c in enumerate(connected):
        if c and m[q][q + 1] < 0:
            m[q][q + 1] = m[q + 1][q] = 0
    conn = [v for row in m for v in row]
    plen, alen = rng.randint(0, 40), rng.randint(0, 40)
    item = rng.randint(0, 10**6)
    return MapRecord(
        item=item, label=f"map_{item:06d}", resolution=rng.uniform(1e-3, 1e3),
        passage_size=rng.randint(1, 99), n_rooms=n,
        seed_rows=ints(n), seed_cols=ints(n), size_rows=ints(n), size_cols=ints(n),
        directions=[rng.randint(0, 1) if c else -1 for c in connected], connected=connected,
        bfs_path_rows=ints(plen), bfs_path_cols=ints(plen),
        astar_path_rows=ints(alen), astar_path_cols=ints(alen),
        bfs_iterations=rng.randint(0, 10**7), astar_iterations=rng.randint(0, 10**7),
        bfs_conn=conn, astar_conn=list(conn),
    )
