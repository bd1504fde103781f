"""Command-line front end: ``overlapnet-figures panels|curve``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .io import FigureError
from .render import FigureSpec, render_overlap_panels, render_sweep_curve


def parse_grid(text: str) -> tuple[int, int]:
    try:
        rows, cols = text.lower().split("x")
        return int(rows), int(cols)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"grid must look like ROWSxCOLS (e.g. 2x3), got {text!r}")


def parse_thresholds(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"thresholds must be comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overlapnet-figures",
        description="Render static figures from overlapnet sweep output.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("panels",
                       help="per-threshold graph panels, overlap colored")
    p.add_argument("--sweep", required=True, metavar="JSON")
    p.add_argument("--graph", required=True, metavar="FILE")
    p.add_argument("--blocks", default=None, metavar="JSON",
                   help="block report for per-block colors (default: a"
                        " blocks.json next to the sweep file, if present)")
    p.add_argument("--out", required=True, metavar="IMG",
                   help="output image (.png or .svg)")
    p.add_argument("--grid", type=parse_grid, default=None, metavar="RxC")
    p.add_argument("--thr", dest="thresholds", type=parse_thresholds,
                   default=None, metavar="T1,T2,...",
                   help="subset/order of thresholds to draw (default: all)")
    p.add_argument("--layout-seed", dest="layout_seed", type=int, default=7)
    p.set_defaults(mode="panels")

    p = sub.add_parser("curve", help="|O| versus threshold step plot")
    p.add_argument("--sweep", required=True, metavar="JSON")
    p.add_argument("--out", required=True, metavar="IMG")
    p.set_defaults(mode="curve")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.mode == "panels":
            blocks = args.blocks
            if blocks is None:
                sibling = Path(args.sweep).parent / "blocks.json"
                blocks = str(sibling) if sibling.is_file() else None
            spec = FigureSpec(sweep=args.sweep, out=args.out,
                              graph=args.graph, blocks=blocks,
                              grid=args.grid, layout_seed=args.layout_seed,
                              thresholds=args.thresholds)
            out = render_overlap_panels(spec)
        else:
            spec = FigureSpec(sweep=args.sweep, out=args.out)
            out = render_sweep_curve(spec)
    except (FigureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
