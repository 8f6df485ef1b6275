"""Command-line interface: ``map2d generate | characterize | render | inspect | validate``.

Exit codes: 0 success, 1 failed validation or unusable input files,
2 usage or parameter errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .dataset import (
    CSV_NAME,
    DatasetManifest,
    characterize,
    decode_png,
    dump_dataset_csv,
    generate_dataset,
    parse_dataset_csv,
    validate_dataset,
)
from .errors import InvalidParameterError, Map2DError
from .grid import GenParams
from .render import Which, render_map

log = logging.getLogger("map2d")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        return (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected MIN:MAX or a single integer, got {text!r}") from None


def _colour(text: str) -> tuple[int, int, int]:
    try:
        rgb = tuple(int(v) for v in text.split(","))
    except ValueError:
        rgb = ()
    if len(rgb) != 3 or not all(0 <= v <= 255 for v in rgb):
        raise argparse.ArgumentTypeError(f"expected R,G,B with components in 0..255, got {text!r}")
    return rgb


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    d = GenParams()
    parser = _Parser(prog="map2d", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="generate a dataset directory")
    gen.add_argument("--count", type=int, default=10000, help="number of maps (default 10000)")
    gen.add_argument("--rows", type=int, default=d.rows, help="map rows in pixels (default 64)")
    gen.add_argument("--cols", type=int, default=d.cols, help="map columns in pixels (default 64)")
    gen.add_argument("--rooms", type=_range, default=d.room_count_range, metavar="MIN:MAX",
                     help="room count range (default 2:9)")
    gen.add_argument("--room-rows", type=_range, default=d.room_rows_range, metavar="MIN:MAX",
                     help="room height range (default 14:33)")
    gen.add_argument("--room-cols", type=_range, default=d.room_cols_range, metavar="MIN:MAX",
                     help="room width range (default 14:33)")
    gen.add_argument("--tunnel", type=_range, default=d.tunnel_range, metavar="MIN:MAX",
                     help="corridor width range (default 7:15)")
    gen.add_argument("--skip-prob", default="0.1",
                     help="probability a consecutive room pair is left unconnected (default 0.1)")
    gen.add_argument("--resolution", type=float, default=d.resolution,
                     help="metres per pixel, metadata only (default 0.1)")
    gen.add_argument("--seed", type=_seed, default=0, help="master seed (default 0)")
    gen.add_argument("--workers", type=int, default=1, help="worker processes (default 1)")
    gen.add_argument("--out", required=True, type=Path, help="output directory")

    char = sub.add_parser("characterize", help="recompute the CSV characterization from the PNGs")
    char.add_argument("--in", dest="indir", required=True, type=Path, help="dataset directory")
    char.add_argument("--algo", choices=[w.value for w in Which], default="both",
                      help="which algorithm's columns to recompute (default both)")
    char.add_argument("--out", type=Path, help="CSV to write (default stdout)")

    ren = sub.add_parser("render", help="draw recorded paths over a map")
    ren.add_argument("--in", dest="indir", type=Path, help="dataset directory (with --label)")
    ren.add_argument("--label", help="map label, e.g. map_000042")
    ren.add_argument("--map", type=Path, help="map PNG; its CSV is looked up next to it")
    ren.add_argument("--csv", type=Path, help="CSV to take the record from")
    ren.add_argument("--algo", choices=[w.value for w in Which], default="both",
                     help="which paths to draw (default both)")
    ren.add_argument("--bfs-color", type=_colour, metavar="R,G,B", help="BFS path colour (default 0,255,0)")
    ren.add_argument("--astar-color", type=_colour, metavar="R,G,B", help="A* path colour (default 102,178,255)")
    ren.add_argument("--out", required=True, type=Path, help="RGB PNG to write")

    ins = sub.add_parser("inspect", help="summarise one map and its CSV record")
    ins.add_argument("--map", required=True, type=Path, help="map PNG")
    ins.add_argument("--csv", type=Path, help="CSV to take the record from")

    val = sub.add_parser("validate", help="check a dataset directory")
    val.add_argument("--in", dest="indir", required=True, type=Path, help="dataset directory")
    return parser


def _csv_for(map_path: Path, explicit: Path | None) -> Path:
    if explicit is not None:
        return explicit
    try:
        return map_path.parent / DatasetManifest.load(map_path.parent).csv_path
    except (OSError, ValueError, KeyError):
        return map_path.parent / CSV_NAME


def _find_record(csv_path: Path, label: str):
    for rec in parse_dataset_csv(csv_path):
        if rec.label == label:
            return rec
    raise FileNotFoundError(f"no record labelled {label!r} in {csv_path}")


def _cmd_generate(args) -> int:
    if args.count < 0:
        raise InvalidParameterError(f"--count must be non-negative, got {args.count}")
    if args.workers < 1:
        raise InvalidParameterError(f"--workers must be at least 1, got {args.workers}")
    params = GenParams(
        rows=args.rows, cols=args.cols, room_count_range=args.rooms,
        room_rows_range=args.room_rows, room_cols_range=args.room_cols,
        tunnel_range=args.tunnel, skip_probability=args.skip_prob, resolution=args.resolution,
    )
    manifest = generate_dataset(args.count, params, args.seed, args.out, workers=args.workers)
    print(f"{manifest.count} maps written to {args.out}")
    print(f"content_digest={manifest.content_digest}")
    return EXIT_OK


def _cmd_characterize(args) -> int:
    manifest = DatasetManifest.load(args.indir)
    records = parse_dataset_csv(args.indir / manifest.csv_path)
    keep = {"bfs": "astar_", "astar": "bfs_"}.get(args.algo)
    for rec in records:
        grid = decode_png((args.indir / f"{rec.label}.png").read_bytes())
        for name, value in characterize(grid, rec.seeds).items():
            if keep is None or not name.startswith(keep):
                setattr(rec, name, value)
    text = dump_dataset_csv(records)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
        print(f"{len(records)} records written to {args.out}")
    return EXIT_OK


def _cmd_render(args) -> int:
    if (args.map is None) == (args.label is None):
        raise _UsageError("render: give exactly one of --map or --label")
    if args.label is not None and args.indir is None and args.csv is None:
        raise _UsageError("render: --label needs --in or --csv")
    if args.map is not None:
        map_path = args.map
        label = map_path.stem
        csv_path = _csv_for(map_path, args.csv)
    else:
        label = args.label
        base = args.indir if args.indir is not None else args.csv.parent
        map_path = base / f"{label}.png"
        csv_path = args.csv if args.csv is not None else _csv_for(map_path, None)
    record = _find_record(csv_path, label)
    palette = {}
    if args.bfs_color:
        palette["bfs"] = args.bfs_color
    if args.astar_color:
        palette["astar"] = args.astar_color
    args.out.write_bytes(render_map(map_path.read_bytes(), record, args.algo, palette))
    print(f"rendered {label} to {args.out}")
    return EXIT_OK


def _cmd_inspect(args) -> int:
    grid = decode_png(args.map.read_bytes())
    record = _find_record(_csv_for(args.map, args.csv), args.map.stem)
    print(f"label: {record.label}")
    print(f"rows: {grid.rows}")
    print(f"cols: {grid.cols}")
    print(f"free_fraction: {grid.free_fraction():.6f}")
    print(f"n_rooms: {record.n_rooms}")
    print("seeds: " + " ".join(f"{r},{c}" for r, c in record.seeds))
    print("connected: " + " ".join(str(c) for c in record.connected))
    print(f"passage_size: {record.passage_size}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    report = validate_dataset(args.indir)
    for label, rule, detail in report.errors:
        print(f"{label}\t{rule}\t{detail}")
    print(f"{report.maps_checked} maps checked, {len(report.errors)} errors")
    return EXIT_OK if report.ok else EXIT_FAIL


COMMANDS = {
    "generate": _cmd_generate,
    "characterize": _cmd_characterize,
    "render": _cmd_render,
    "inspect": _cmd_inspect,
    "validate": _cmd_validate,
}


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except (_UsageError, InvalidParameterError) as exc:
        print(f"map2d {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (Map2DError, OSError, ValueError, KeyError) as exc:
        print(f"map2d {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
