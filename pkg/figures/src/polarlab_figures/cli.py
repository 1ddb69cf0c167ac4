"""Command line entry point.

Usage:
    polarlab-figures --figure fig3 --in results/fig3.csv --out fig3.png
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .io import SchemaError
from .render import FORMATS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polarlab-figures",
        description="Render polarlab scenario CSVs into figures.",
    )
    parser.add_argument(
        "--version", action="version", version=f"polarlab-figures {__version__}"
    )
    parser.add_argument(
        "--figure",
        required=True,
        choices=[f"fig{i}" for i in range(1, 7)],
        help="which figure to draw",
    )
    parser.add_argument("--in", dest="input_csv", required=True, help="scenario CSV")
    parser.add_argument("--out", dest="output", required=True, help="image path")
    parser.add_argument("--format", choices=FORMATS, default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        figure=args.figure,
        input_csv=args.input_csv,
        output=args.output,
        format=args.format,
    )
    try:
        out = render(spec)
    except (SchemaError, FileNotFoundError, ValueError) as exc:
        print(f"polarlab-figures: error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
