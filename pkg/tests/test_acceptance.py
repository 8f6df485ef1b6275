"""Exit criteria. Each test appends one PASS/FAIL line to the terminal summary."""

import filecmp
import random
import shutil
import time
from collections import Counter

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, SMALL_PARAMS, random_maps, random_record
from map2d import (
    Algo,
    GenParams,
    GridMap,
    astar_shortest_path,
    bfs_shortest_path,
    connection_matrix,
    decode_png,
    encode_png,
    generate_dataset,
    parse_dataset_csv,
    validate_dataset,
    write_dataset_csv,
)
from map2d.dataset import CSV_NAME, MANIFEST_NAME
from map2d.oracle import oracle_all_pairs

TABLE1 = GenParams(rows=64, cols=64, room_count_range=(2, 9), room_rows_range=(14, 33),
                   room_cols_range=(14, 33), tunnel_range=(7, 15))
FULL_COUNT = 10_000
MASTER_SEED = 1
TIME_LIMIT_S = 120.0


def report(number, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def full_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("full") / "serial"
    # warm the JIT cache so the timing reflects generation, not compilation
    generate_dataset(1, TABLE1, MASTER_SEED, tmp_path_factory.mktemp("warm"))
    t0 = time.perf_counter()
    manifest = generate_dataset(FULL_COUNT, TABLE1, MASTER_SEED, out)
    elapsed = time.perf_counter() - t0
    return out, manifest, elapsed


@pytest.fixture(scope="module")
def full_records(full_run):
    return parse_dataset_csv(full_run[0] / CSV_NAME)


@pytest.fixture(scope="module")
def small_corpus():
    return random_maps(SMALL_PARAMS, 200, base=50_000)


def test_c01_dataset_scale(full_run, full_records):
    out, manifest, elapsed = full_run
    pngs = sorted(p.name for p in out.glob("map_*.png"))
    ok = len(pngs) == FULL_COUNT and len(full_records) == FULL_COUNT and elapsed < TIME_LIMIT_S
    report(1, ok, f"{len(pngs)} PNGs, {len(full_records)} CSV rows in {elapsed:.1f}s (limit {TIME_LIMIT_S:.0f}s)")


def test_c02_skip_rate(full_records):
    flags = [c for r in full_records for c in r.connected]
    frac = sum(flags) / len(flags)
    report(2, 0.89 <= frac <= 0.91, f"connected fraction {frac:.4f} over {len(flags)} pairs (want [0.89, 0.91])")


def test_c03_room_count_distribution(full_records):
    counts = Counter(r.n_rooms for r in full_records)
    ok = set(counts) == set(range(2, 10)) and all(1050 <= counts[n] <= 1450 for n in range(2, 10))
    report(3, ok, "n_rooms counts " + ", ".join(f"{n}:{counts[n]}" for n in range(2, 10)) + " (want 1250 +/- 200)")


def test_c04_oracle_equivalence(small_corpus):
    pairs = mismatches = 0
    for grid, layout in small_corpus:
        seeds = layout.seeds
        oracle = oracle_all_pairs(grid, seeds)
        bfs_m = connection_matrix(grid, seeds, Algo.BFS)
        astar_m = connection_matrix(grid, seeds, Algo.ASTAR)
        if not (np.array_equal(bfs_m, astar_m) and np.array_equal(bfs_m, oracle)):
            mismatches += 1
        for i, s in enumerate(seeds):
            for j, t in enumerate(seeds):
                pairs += 1
                b = bfs_shortest_path(grid, s, t).moves
                a = astar_shortest_path(grid, s, t).moves
                if not (a == b == oracle[i, j]):
                    mismatches += 1
    report(4, mismatches == 0, f"{pairs} seed pairs on {len(small_corpus)} 32x32 maps, {mismatches} mismatches")


def test_c05_connectivity_theorem():
    violations = checked = 0
    for grid, layout in random_maps(TABLE1, 1000, base=7_000_000):
        m = connection_matrix(grid, layout.seeds, Algo.BFS)
        for q, linked in enumerate(layout.connected):
            if linked:
                checked += 1
                violations += int(m[q, q + 1] < 0)
    report(5, violations == 0, f"{checked} connected pairs over 1000 maps, {violations} violations")


def test_c06_determinism(full_run, tmp_path_factory):
    out, manifest, _ = full_run
    base = tmp_path_factory.mktemp("repeat")
    again = generate_dataset(FULL_COUNT, TABLE1, MASTER_SEED, base / "serial2")
    parallel = generate_dataset(FULL_COUNT, TABLE1, MASTER_SEED, base / "parallel", workers=2)
    names = manifest.map_files + [CSV_NAME, MANIFEST_NAME]
    diffs = []
    for other in (base / "serial2", base / "parallel"):
        _, mismatch, errors = filecmp.cmpfiles(out, other, names, shallow=False)
        diffs += mismatch + errors
    ok = not diffs and manifest.content_digest == again.content_digest == parallel.content_digest
    report(6, ok, f"serial rerun and 2-worker run vs first run: {len(diffs)} differing files, "
                  f"digest {manifest.content_digest[:23]}...")


def test_c07_round_trips(tmp_path):
    rng = np.random.default_rng(7)
    grid_failures = 0
    for _ in range(1000):
        rows, cols = rng.integers(1, 65, size=2)
        grid = GridMap(rng.integers(0, 2, size=(rows, cols), dtype=np.uint8))
        grid_failures += decode_png(encode_png(grid)) != grid

    draw = random.Random(7)
    records = [random_record(draw) for _ in range(1000)]
    path = tmp_path / "records.csv"
    write_dataset_csv(records, path)
    parsed = parse_dataset_csv(path)
    record_failures = sum(a != b for a, b in zip(records, parsed)) + abs(len(records) - len(parsed))
    report(7, grid_failures == 0 and record_failures == 0,
           f"1000 grids: {grid_failures} PNG failures; 1000 records: {record_failures} CSV failures")


def test_c08_matrix_properties(full_records, small_corpus):
    matrices = [r.conn_matrix(a) for r in full_records for a in Algo]
    matrices += [connection_matrix(g, l.seeds, a) for g, l in small_corpus for a in Algo]
    bad = 0
    for m in matrices:
        reach = m >= 0
        tri_ok = True
        for j in range(len(m)):
            via = m[:, j][:, None] + m[j, :][None, :]
            mask = reach[:, j][:, None] & reach[j, :][None, :] & reach
            tri_ok &= bool((m[mask] <= via[mask]).all())
        bad += not (np.array_equal(m, m.T) and (np.diag(m) == 0).all() and tri_ok)
    report(8, bad == 0, f"{len(matrices)} matrices checked, {bad} violate symmetry/diagonal/triangle")


def test_c09_expansion_statistic(small_corpus):
    segments = better = 0
    for grid, layout in small_corpus:
        for s, t in zip(layout.seeds, layout.seeds[1:]):
            b = bfs_shortest_path(grid, s, t)
            if not b.found:
                continue
            a = astar_shortest_path(grid, s, t)
            segments += 1
            better += a.expansions <= b.expansions
    frac = better / segments
    report(9, frac >= 0.95, f"A* <= BFS expansions on {better}/{segments} solvable segments ({frac:.1%}, want >= 95%)")


def test_c10_tamper_detection(tmp_path):
    pristine = tmp_path / "pristine"
    generate_dataset(100, TABLE1, 4242, pristine)
    clean = validate_dataset(pristine)

    tampered = tmp_path / "tampered"
    shutil.copytree(pristine, tampered)
    rng = random.Random(99)
    mutated = []
    for rec in parse_dataset_csv(tampered / CSV_NAME):
        cells = list(zip(rec.bfs_path_rows, rec.bfs_path_cols)) + list(zip(rec.astar_path_rows, rec.astar_path_cols))
        if not cells:
            continue
        png = tampered / f"{rec.label}.png"
        grid = decode_png(png.read_bytes())
        grid.cells[rng.choice(cells)] = 1
        png.write_bytes(encode_png(grid))
        mutated.append(rec.label)
    dirty = validate_dataset(tampered)
    flagged = sum("path-validity" in dirty.rules_for(label) for label in mutated)
    ok = clean.ok and clean.maps_checked == 100 and flagged == len(mutated) and len(mutated) >= 90
    report(10, ok, f"pristine: {len(clean.errors)} errors; flagged {flagged}/{len(mutated)} mutated maps")
