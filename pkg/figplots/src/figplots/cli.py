"""Command line entry point: ``figplots <panel> --in file.csv --out fig.png``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from figplots.panels import PANEL_SCHEMAS, PlotSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figplots",
        description="Render figures from rydsim CSV output.",
    )
    parser.add_argument("panel", choices=sorted(PANEL_SCHEMAS),
                        help="panel type to render")
    parser.add_argument("--in", dest="inputs", action="append", required=True,
                        metavar="FILE.csv", help="input CSV (repeatable)")
    parser.add_argument("--out", required=True, metavar="FIG",
                        help="output image path (.png, .svg, or .pdf)")
    parser.add_argument("--label", dest="labels", action="append", default=[],
                        metavar="TEXT",
                        help="legend label per input file (repeatable)")
    parser.add_argument("--raw-time", action="store_true",
                        help="pulses panel: plot raw time in microseconds "
                             "instead of normalizing to the step duration")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        spec = PlotSpec(
            panel=args.panel,
            inputs=tuple(Path(p) for p in args.inputs),
            output=Path(args.out),
            raw_time=args.raw_time,
            labels=tuple(args.labels),
        )
        out = render(spec)
    except SchemaError as exc:
        print(f"figplots: {exc}", file=sys.stderr)
        return 1
    except (FileNotFoundError, ValueError) as exc:
        print(f"figplots: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
