"""Command line entry point: `figures ratios|traces|landscape --in ... --out ...`."""

from __future__ import annotations

import argparse
import sys

from tspfigures.plots import KINDS, FigureSpec, ParseError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figures",
                                     description="Render tspvqa result files as figures")
    sub = parser.add_subparsers(dest="kind", required=True)
    for kind, blurb in (
        ("ratios", "ratio-vs-n curves with std bands from a summary CSV"),
        ("traces", "evaluated energies and moving minimum from a run record"),
        ("landscape", "energy-landscape heatmap from a landscape CSV"),
    ):
        cmd = sub.add_parser(kind, help=blurb)
        cmd.add_argument("--in", dest="input_path", required=True)
        cmd.add_argument("--out", dest="output_path", required=True,
                         help="output image; vector formats (.svg/.pdf) recommended")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    assert args.kind in KINDS
    spec = FigureSpec(kind=args.kind, input_path=args.input_path,
                      output_path=args.output_path)
    try:
        out = render(spec)
    except (ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
