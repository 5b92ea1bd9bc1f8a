"""Entry point: plot --csv <path> --out <dir>."""

from __future__ import annotations

import argparse
import sys

from .aggregate import EmptyData, SchemaMismatch
from .render import render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plot", description="render sweep CSVs as line charts")
    parser.add_argument("--csv", required=True, help="sweep results CSV")
    parser.add_argument("--out", required=True, help="directory for the images")
    args = parser.parse_args(argv)
    try:
        charts = render(args.csv, args.out)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SchemaMismatch, EmptyData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for param in charts:
        print(f"wrote {args.out}/{param}.png")
    return 0


if __name__ == "__main__":
    sys.exit(main())
