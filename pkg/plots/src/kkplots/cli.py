"""plot_figures: render figures from simulation CSV output.

    plot_figures <kind> --in FILE [--in FILE ...] --out FILE

Kinds: surface, slice, contour, moments, lines.  Exit code 0 on
success, 2 on usage or schema errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .figures import FIGURE_KINDS, FigureSpec, render
from .reader import SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot_figures",
        description="Render figures from simulation CSV files.",
    )
    parser.add_argument("kind", choices=FIGURE_KINDS, help="figure kind")
    parser.add_argument(
        "--in",
        dest="inputs",
        action="append",
        required=True,
        metavar="FILE",
        help="input CSV (repeat for overlays)",
    )
    parser.add_argument("--out", required=True, metavar="FILE", help="output image (.png, .svg, or .pdf)")
    parser.add_argument("--title", default="", help="figure title override")
    parser.add_argument("--xlabel", default="", help="x axis label override")
    parser.add_argument("--ylabel", default="", help="y axis label override")
    parser.add_argument(
        "--label",
        dest="series_labels",
        action="append",
        default=None,
        metavar="TEXT",
        help="legend label for the matching --in (repeatable)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        inputs=tuple(Path(p) for p in args.inputs),
        kind=args.kind,
        out=Path(args.out),
        title=args.title,
        xlabel=args.xlabel,
        ylabel=args.ylabel,
        labels=tuple(args.series_labels or ()),
    )
    try:
        render(spec)
    except SchemaError as err:
        print(f"plot_figures: {err}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
