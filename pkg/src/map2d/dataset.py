"""Dataset production: PNG maps, the metadata CSV, the manifest and validation.

A dataset directory holds ``map_000000.png ...``, ``maps.csv`` (one row per
map) and ``manifest.txt`` (the seed, parameters and a SHA-256 digest of every
emitted byte). Everything is a pure function of ``(count, params, master_seed)``.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import InvalidParameterError, PngFormatError, SchemaError
from .grid import OCCUPIED, GenParams, GridMap, MapLayout, generate_map
from .rng import SplitMix64, derive_map_state
from .search import Algo, chain_path, connection_matrix

log = logging.getLogger(__name__)

CSV_NAME = "maps.csv"
MANIFEST_NAME = "manifest.txt"
MANIFEST_FORMAT = "map2d-dataset/1"
LABEL_RE = re.compile(r"^map_\d{6,}$")


def map_label(item: int) -> str:
    return f"map_{item:06d}"


# --------------------------------------------------------------------------- PNG

def encode_png(grid: GridMap) -> bytes:
    """8-bit grayscale PNG, one pixel per cell: free black (0), occupied white (255)."""
    pixels = np.where(grid.cells == OCCUPIED, 255, 0).astype(np.uint8)
    buf = io.BytesIO()
    Image.fromarray(pixels, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def decode_png(data: bytes) -> GridMap:
    """Inverse of :func:`encode_png`; pixels >= 128 read as occupied.

    Palette and RGB images are accepted only when every pixel is a pure gray.
    """
    try:
        with Image.open(io.BytesIO(data)) as img:
            if img.format != "PNG":
                raise PngFormatError(f"expected a PNG image, got {img.format}")
            img.load()
            mode = img.mode
            if mode in ("L", "1"):
                pixels = np.asarray(img.convert("L"))
            elif mode in ("RGB", "P"):
                rgb = np.asarray(img.convert("RGB"))
                if not ((rgb[..., 0] == rgb[..., 1]) & (rgb[..., 1] == rgb[..., 2])).all():
                    raise PngFormatError(f"{mode} image is not grayscale")
                pixels = rgb[..., 0]
            else:
                raise PngFormatError(f"unsupported image mode {mode!r}")
    except PngFormatError:
        raise
    except (OSError, SyntaxError, ValueError, UnidentifiedImageError) as exc:
        raise PngFormatError(f"cannot decode PNG: {exc}") from exc
    return GridMap((pixels >= 128).astype(np.uint8))


# ------------------------------------------------------------------------ records

@dataclass
class MapRecord:
    """One CSV row: generation draws plus BFS/A* characterization of a map."""

    item: int
    label: str
    resolution: float
    passage_size: int
    n_rooms: int
    seed_rows: list[int]
    seed_cols: list[int]
    size_rows: list[int]
    size_cols: list[int]
    directions: list[int]
    connected: list[int]
    bfs_path_rows: list[int] = field(default_factory=list)
    bfs_path_cols: list[int] = field(default_factory=list)
    astar_path_rows: list[int] = field(default_factory=list)
    astar_path_cols: list[int] = field(default_factory=list)
    bfs_iterations: int = 0
    astar_iterations: int = 0
    bfs_conn: list[int] = field(default_factory=list)
    astar_conn: list[int] = field(default_factory=list)

    @property
    def seeds(self) -> list[tuple[int, int]]:
        return list(zip(self.seed_rows, self.seed_cols))

    def conn_matrix(self, algo: Algo | str = Algo.BFS) -> np.ndarray:
        flat = self.bfs_conn if Algo(algo) is Algo.BFS else self.astar_conn
        return np.array(flat, dtype=np.int64).reshape(self.n_rooms, self.n_rooms)


FIELDS = [f.name for f in fields(MapRecord)]
LIST_FIELDS = {f.name for f in fields(MapRecord) if str(f.type).startswith("list")}
INT_FIELDS = {"item", "passage_size", "n_rooms", "bfs_iterations", "astar_iterations"}


def characterize(grid: GridMap, seeds: Sequence[tuple[int, int]]) -> dict:
    """BFS and A* chained paths plus connection matrices, keyed by CSV field name."""
    out = {}
    for algo in Algo:
        chain = chain_path(grid, seeds, algo)
        out[f"{algo.value}_path_rows"] = chain.path_rows
        out[f"{algo.value}_path_cols"] = chain.path_cols
        out[f"{algo.value}_iterations"] = chain.total_expansions
        out[f"{algo.value}_conn"] = connection_matrix(grid, seeds, algo).ravel().tolist()
    return out


def make_record(item: int, params: GenParams, layout: MapLayout, grid: GridMap) -> MapRecord:
    return MapRecord(
        item=item,
        label=map_label(item),
        resolution=params.resolution,
        passage_size=layout.tunnel_width,
        n_rooms=layout.n_rooms,
        seed_rows=[r.seed_row for r in layout.rooms],
        seed_cols=[r.seed_col for r in layout.rooms],
        size_rows=[r.size_rows for r in layout.rooms],
        size_cols=[r.size_cols for r in layout.rooms],
        directions=[-1 if d is None else d for d in layout.directions],
        connected=[int(c) for c in layout.connected],
        **characterize(grid, layout.seeds),
    )


def record_problems(rec: MapRecord) -> list[tuple[str, str]]:
    """Self-consistency violations of a single record as ``(rule, detail)`` pairs."""
    problems = []
    n = rec.n_rooms
    if not LABEL_RE.match(rec.label):
        problems.append(("label", f"label {rec.label!r} is not of the form map_######"))
    if n < 1:
        problems.append(("lengths", f"n_rooms must be positive, got {n}"))
        return problems
    expected = {
        "seed_rows": n, "seed_cols": n, "size_rows": n, "size_cols": n,
        "directions": n - 1, "connected": n - 1, "bfs_conn": n * n, "astar_conn": n * n,
    }
    for name, length in expected.items():
        got = len(getattr(rec, name))
        if got != length:
            problems.append(("lengths", f"{name} has {got} entries, expected {length} for n_rooms={n}"))
    for algo in ("bfs", "astar"):
        rows, cols = getattr(rec, f"{algo}_path_rows"), getattr(rec, f"{algo}_path_cols")
        if len(rows) != len(cols):
            problems.append(("lengths", f"{algo} path has {len(rows)} rows but {len(cols)} cols"))
    if problems:
        return problems
    if any(c not in (0, 1) for c in rec.connected):
        problems.append(("connected", f"connected flags must be 0/1, got {rec.connected}"))
    for q, (c, d) in enumerate(zip(rec.connected, rec.directions)):
        if (c == 1 and d not in (0, 1)) or (c == 0 and d != -1):
            problems.append(("directions", f"pair {q}: direction {d} inconsistent with connected={c}"))
    if rec.bfs_conn != rec.astar_conn:
        problems.append(("conn-agreement", "bfs_conn and astar_conn differ"))
    for algo in Algo:
        m = rec.conn_matrix(algo)
        if np.any(np.diag(m) != 0):
            problems.append(("conn-diagonal", f"{algo.value}_conn has a non-zero diagonal"))
        if not np.array_equal(m, m.T):
            problems.append(("conn-symmetry", f"{algo.value}_conn is not symmetric"))
        if np.any(m < -1):
            problems.append(("conn-range", f"{algo.value}_conn has entries below -1"))
    m = rec.conn_matrix(Algo.BFS)
    for q, c in enumerate(rec.connected):
        if c == 1 and m[q, q + 1] < 0:
            problems.append(("connected-consistency",
                             f"rooms {q} and {q + 1} are flagged connected but conn is {m[q, q + 1]}"))
    return problems


# --------------------------------------------------------------------------- CSV

def _format_row(rec: MapRecord) -> str:
    cells = []
    for name in FIELDS:
        value = getattr(rec, name)
        if name in LIST_FIELDS:
            cells.append('"' + " ".join(str(int(v)) for v in value) + '"')
        elif name == "resolution":
            cells.append(repr(float(value)))
        elif name == "label":
            cells.append(str(value))
        else:
            cells.append(str(int(value)))
    return ",".join(cells) + "\n"


def dump_dataset_csv(records: Iterable[MapRecord]) -> str:
    return ",".join(FIELDS) + "\n" + "".join(_format_row(r) for r in records)


def write_dataset_csv(records: Iterable[MapRecord], path: str | os.PathLike) -> None:
    """Write records as UTF-8 CSV; list fields are quoted, space-separated integers."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dump_dataset_csv(records))


def _parse_int(token: str, line: int, column: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise SchemaError(f"non-integer token {token!r}", line, column) from None


def parse_dataset_csv(path: str | os.PathLike, strict: bool = True) -> list[MapRecord]:
    """Read a CSV written by :func:`write_dataset_csv`.

    Rows are identified by file line number (the header is line 1). With
    ``strict`` every record is also checked by :func:`record_problems` and the
    first problem raises; without it only structural errors raise.
    """
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError("file is empty, header missing")
    if rows[0] != FIELDS:
        raise SchemaError(f"header mismatch: expected {','.join(FIELDS)}", 1)
    records = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(FIELDS):
            raise SchemaError(f"expected {len(FIELDS)} columns, got {len(row)}", line)
        values: dict = {}
        for name, token in zip(FIELDS, row):
            if name in LIST_FIELDS:
                values[name] = [_parse_int(t, line, name) for t in token.split()]
            elif name in INT_FIELDS:
                values[name] = _parse_int(token, line, name)
            elif name == "resolution":
                try:
                    values[name] = float(token)
                except ValueError:
                    raise SchemaError(f"non-numeric resolution {token!r}", line, name) from None
            else:
                values[name] = token
        rec = MapRecord(**values)
        if strict:
            problems = record_problems(rec)
            if problems:
                rule, detail = problems[0]
                raise SchemaError(detail, line, rule)
        records.append(rec)
    return records


# ---------------------------------------------------------------------- manifest

def _fmt_range(r: tuple[int, int]) -> str:
    return f"{r[0]}:{r[1]}"


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi or lo)


@dataclass
class DatasetManifest:
    master_seed: int
    params: GenParams
    count: int
    csv_path: str = CSV_NAME
    map_files: list[str] = field(default_factory=list)
    content_digest: str = ""

    def to_text(self) -> str:
        p = self.params
        lines = [
            f"format={MANIFEST_FORMAT}",
            f"master_seed={self.master_seed}",
            f"count={self.count}",
            f"rows={p.rows}",
            f"cols={p.cols}",
            f"room_count_range={_fmt_range(p.room_count_range)}",
            f"room_rows_range={_fmt_range(p.room_rows_range)}",
            f"room_cols_range={_fmt_range(p.room_cols_range)}",
            f"tunnel_range={_fmt_range(p.tunnel_range)}",
            f"skip_probability={p.skip_probability}",
            f"resolution={p.resolution!r}",
            f"csv_path={self.csv_path}",
            f"content_digest={self.content_digest}",
        ]
        lines += [f"map_file={name}" for name in self.map_files]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "DatasetManifest":
        kv: dict[str, str] = {}
        files = []
        for n, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ValueError(f"manifest line {n} is not key=value: {line!r}")
            if key == "map_file":
                files.append(value)
            else:
                kv[key] = value
        if kv.get("format") != MANIFEST_FORMAT:
            raise ValueError(f"unknown manifest format {kv.get('format')!r}")
        params = GenParams(
            rows=int(kv["rows"]),
            cols=int(kv["cols"]),
            room_count_range=_parse_range(kv["room_count_range"]),
            room_rows_range=_parse_range(kv["room_rows_range"]),
            room_cols_range=_parse_range(kv["room_cols_range"]),
            tunnel_range=_parse_range(kv["tunnel_range"]),
            skip_probability=Fraction(kv["skip_probability"]),
            resolution=float(kv["resolution"]),
        )
        return cls(
            master_seed=int(kv["master_seed"]),
            params=params,
            count=int(kv["count"]),
            csv_path=kv["csv_path"],
            map_files=files,
            content_digest=kv["content_digest"],
        )

    @classmethod
    def load(cls, directory: str | os.PathLike) -> "DatasetManifest":
        return cls.from_text(Path(directory, MANIFEST_NAME).read_text(encoding="utf-8"))


class _Digest:
    """SHA-256 over ``name \\n bytes`` of every emitted file, in emission order."""

    def __init__(self) -> None:
        self._h = hashlib.sha256()

    def add(self, name: str, data: bytes) -> None:
        self._h.update(name.encode("utf-8") + b"\n" + len(data).to_bytes(8, "big"))
        self._h.update(data)

    def hexdigest(self) -> str:
        return "sha256:" + self._h.hexdigest()


# -------------------------------------------------------------------- generation

def build_item(item: int, params: GenParams, master_seed: int) -> tuple[GridMap, MapLayout, MapRecord]:
    """Regenerate map ``item`` of a dataset independently of all other maps."""
    grid, layout = generate_map(params, SplitMix64(derive_map_state(master_seed, item)))
    return grid, layout, make_record(item, params, layout, grid)


def _produce(args: tuple[int, GenParams, int]) -> tuple[bytes, MapRecord]:
    item, params, master_seed = args
    grid, _, record = build_item(item, params, master_seed)
    return encode_png(grid), record


def generate_dataset(count: int, params: GenParams, master_seed: int,
                     out_dir: str | os.PathLike, workers: int = 1) -> DatasetManifest:
    """Generate, characterize and write ``count`` maps into ``out_dir``.

    With ``workers > 1`` maps are built in a process pool; results are
    consumed in item order so the output bytes do not depend on scheduling.
    Files written before an I/O failure are removed.
    """
    if not isinstance(params, GenParams):
        raise InvalidParameterError("params must be a GenParams instance")
    if not isinstance(count, (int, np.integer)) or count < 0:
        raise InvalidParameterError(f"count must be a non-negative integer, got {count!r}")
    if not isinstance(master_seed, (int, np.integer)) or not 0 <= master_seed < 1 << 64:
        raise InvalidParameterError(f"master_seed must be an unsigned 64-bit integer, got {master_seed!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    written: list[Path] = []
    digest = _Digest()
    manifest = DatasetManifest(master_seed=int(master_seed), params=params, count=int(count))
    jobs = ((i, params, int(master_seed)) for i in range(count))
    pool = ProcessPoolExecutor(workers) if workers > 1 and count > 1 else None
    try:
        results = pool.map(_produce, jobs, chunksize=max(1, min(256, count // (4 * workers)))) if pool else map(_produce, jobs)
        records = []
        for png, record in results:
            name = f"{record.label}.png"
            path = out / name
            written.append(path)
            path.write_bytes(png)
            digest.add(name, png)
            manifest.map_files.append(name)
            records.append(record)
        csv_bytes = dump_dataset_csv(records).encode("utf-8")
        csv_path = out / CSV_NAME
        written.append(csv_path)
        csv_path.write_bytes(csv_bytes)
        digest.add(CSV_NAME, csv_bytes)
        manifest.content_digest = digest.hexdigest()
        manifest_path = out / MANIFEST_NAME
        written.append(manifest_path)
        manifest_path.write_text(manifest.to_text(), encoding="utf-8")
    except OSError:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    finally:
        if pool:
            pool.shutdown()
    log.info("wrote %d maps to %s (%s)", count, out, manifest.content_digest)
    return manifest


# -------------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    maps_checked: int = 0
    errors: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def add(self, label: str, rule: str, detail: str) -> None:
        self.errors.append((label, rule, detail))

    def rules_for(self, label: str) -> set[str]:
        return {rule for lab, rule, _ in self.errors if lab == label}


def replay_path_problems(grid: GridMap, rows: Sequence[int], cols: Sequence[int],
                         seeds: Sequence[tuple[int, int]]) -> list[str]:
    """Check a recorded route against a grid.

    The route must consist of free in-bounds cells. It may break adjacency
    only where a failed segment was skipped, so every maximal 4-connected run
    must start and end on a seed cell.
    """
    cells = list(zip(rows, cols))
    if not cells:
        return []
    problems = []
    for cell in cells:
        if not grid.in_bounds(cell):
            problems.append(f"cell {cell} is out of bounds")
        elif not grid.is_free(cell):
            problems.append(f"cell {cell} is occupied")
    seed_set = set(seeds)
    run_start = cells[0]
    for prev, cur in zip(cells, cells[1:] + [None]):
        if cur is not None and abs(prev[0] - cur[0]) + abs(prev[1] - cur[1]) == 1:
            continue
        if run_start not in seed_set or prev not in seed_set:
            problems.append(f"run {run_start}..{prev} does not join two seeds")
        run_start = cur
    return problems


def _regenerated_fields(rec: MapRecord, layout_rec: MapRecord) -> list[str]:
    names = ["passage_size", "n_rooms", "seed_rows", "seed_cols", "size_rows",
             "size_cols", "directions", "connected", "resolution"]
    return [n for n in names if getattr(rec, n) != getattr(layout_rec, n)]


def validate_dataset(directory: str | os.PathLike) -> ValidationReport:
    """Re-check a dataset directory and report every violation found.

    Besides per-record consistency this replays recorded paths on the decoded
    PNGs, recomputes the characterization, regenerates each map from the
    manifest seed and recomputes the content digest.
    """
    d = Path(directory)
    report = ValidationReport()
    try:
        manifest = DatasetManifest.load(d)
    except FileNotFoundError:
        report.add("*", "missing-file", f"{d / MANIFEST_NAME} not found")
        return report
    except (ValueError, KeyError) as exc:
        report.add("*", "manifest", f"cannot parse manifest: {exc}")
        return report

    csv_path = d / manifest.csv_path
    try:
        records = parse_dataset_csv(csv_path, strict=False)
    except FileNotFoundError:
        report.add("*", "missing-file", f"{csv_path} not found")
        return report
    except SchemaError as exc:
        report.add("*", "schema", str(exc))
        return report

    if len(records) != manifest.count:
        report.add("*", "count", f"manifest count {manifest.count} but CSV has {len(records)} rows")
    if len(manifest.map_files) != manifest.count:
        report.add("*", "count", f"manifest lists {len(manifest.map_files)} map files for count {manifest.count}")
    labels = [r.label for r in records]
    if len(set(labels)) != len(labels):
        report.add("*", "label", "duplicate labels in CSV")

    params = manifest.params
    digest = _Digest()
    for index, rec in enumerate(records):
        report.maps_checked += 1
        label = rec.label
        if rec.item != index or label != map_label(rec.item):
            report.add(label, "label", f"row {index} has item {rec.item} and label {label!r}")
        expected_file = manifest.map_files[index] if index < len(manifest.map_files) else None
        if expected_file is not None and Path(expected_file).stem != label:
            report.add(label, "label", f"manifest file {expected_file} does not match label")
        problems = record_problems(rec)
        for rule, detail in problems:
            report.add(label, rule, detail)

        png_path = d / f"{label}.png"
        try:
            png = png_path.read_bytes()
        except FileNotFoundError:
            report.add(label, "missing-file", f"{png_path.name} not found")
            continue
        digest.add(png_path.name, png)
        try:
            grid = decode_png(png)
        except PngFormatError as exc:
            report.add(label, "png", str(exc))
            continue
        if grid.shape != (params.rows, params.cols):
            report.add(label, "png", f"image is {grid.rows}x{grid.cols}, manifest says {params.rows}x{params.cols}")
            continue
        if any(rule == "lengths" for rule, _ in problems):
            continue

        seeds = rec.seeds
        bad_seeds = [s for s in seeds if not grid.is_free(s)]
        for s in bad_seeds:
            report.add(label, "seed-free", f"seed {s} is not a free cell")
        for algo in ("bfs", "astar"):
            for msg in replay_path_problems(grid, getattr(rec, f"{algo}_path_rows"),
                                            getattr(rec, f"{algo}_path_cols"), seeds):
                report.add(label, "path-validity", f"{algo} path: {msg}")

        regen_grid, _, regen = build_item(rec.item, params, manifest.master_seed)
        mismatched = _regenerated_fields(rec, regen)
        if mismatched:
            report.add(label, "regeneration", f"fields differ from regenerated map: {', '.join(mismatched)}")
        if regen_grid != grid:
            diff = int(np.count_nonzero(regen_grid.cells != grid.cells))
            report.add(label, "regeneration", f"image differs from regenerated map in {diff} cells")
        if bad_seeds:
            continue
        recomputed = characterize(grid, seeds)
        stale = [name for name, value in recomputed.items() if getattr(rec, name) != value]
        if stale:
            report.add(label, "characterization", f"fields disagree with recomputation: {', '.join(stale)}")

    if csv_path.exists():
        digest.add(manifest.csv_path, csv_path.read_bytes())
        if digest.hexdigest() != manifest.content_digest:
            report.add("*", "digest", f"content digest {digest.hexdigest()} != manifest {manifest.content_digest}")
    return report
