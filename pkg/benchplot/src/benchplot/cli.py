"""Command line entry point: CSV in, PNG chart files out."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .reader import SchemaError
from .render import KINDS, PlotSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render benchmark CSV output as per-input-kind charts.",
    )
    parser.add_argument("--csv", type=Path, required=True, help="benchmark CSV file")
    parser.add_argument(
        "--kind",
        choices=KINDS,
        required=True,
        help="chart kind: elapsed time (log-log) or parallel efficiency",
    )
    parser.add_argument(
        "--outdir",
        type=Path,
        default=Path("."),
        help="directory for the PNG files (default: current directory)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written = render(PlotSpec(csv_path=args.csv, kind=args.kind, outdir=args.outdir))
    except FileNotFoundError:
        print(f"error: no such file: {args.csv}", file=sys.stderr)
        return 1
    except SchemaError as err:
        print(f"error: {args.csv}: {err}", file=sys.stderr)
        return 1
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
