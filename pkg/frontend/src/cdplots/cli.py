"""Command line: render one figure kind from a results CSV."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, PlotError, PlotSpec, render


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="cdplots",
                                 description="Render figures from a "
                                             "clusterdisco results CSV")
    ap.add_argument("--csv", required=True, help="results CSV path")
    ap.add_argument("--kind", required=True, choices=KINDS)
    ap.add_argument("--family", default="adj", choices=("adj", "arrow"),
                    help="metric family for precision/recall figures")
    ap.add_argument("-o", "--output", required=True,
                    help="image path; the extension picks the format")
    args = ap.parse_args(argv)
    spec = PlotSpec(args.csv, args.kind, args.output, args.family)
    try:
        series = render(spec)
    except (PlotError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output} ({len(series)} series)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
