"""Command line: ``render <figure-spec file> [more spec files ...]``."""

from __future__ import annotations

import argparse
import sys

from .render import render
from .spec import SpecError, parse_figure_spec


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render",
        description="Render ofdm-ranging CSV outputs to figures "
        "(spec files use the same key = value format as the experiment CLI).",
    )
    parser.add_argument("specs", nargs="+", help="figure spec file(s)")
    args = parser.parse_args(argv)
    try:
        for path in args.specs:
            print(render(parse_figure_spec(path)))
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
