"""Entry point: steerkit-figs CSV_PATH --figure {1,2,3} --out IMAGE."""

import argparse
import sys

from steerkit_figs.render import render_fig
from steerkit_figs.tables import SchemaError, load_table


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="steerkit-figs",
        description="render region figures from steerkit scan CSVs",
    )
    parser.add_argument("csv_path", help="scan CSV produced by `steerkit scan`")
    parser.add_argument("--figure", type=int, choices=(1, 2, 3), required=True)
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        table = load_table(args.csv_path)
        render_fig(table, args.figure, args.out)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote figure {args.figure} to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
