"""Command-line entry point: icshim annotate."""

import argparse
import os
import sys

from . import __version__
from .annotate import run_annotation

EXIT_OK = 0
EXIT_SKIPS = 1
EXIT_USAGE = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icshim",
        description="Annotate raw JSONL text into CoNLL-U with sentiment metadata.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    annotate = sub.add_parser("annotate", help="JSONL in, CoNLL-U out")
    annotate.add_argument("--input", required=True, help="raw JSONL file")
    annotate.add_argument("--output", required=True, help="CoNLL-U file to write")
    annotate.add_argument(
        "--shards",
        type=int,
        default=1,
        help="process the input in N parallel shards (output bytes unchanged)",
    )
    annotate.add_argument(
        "--skip-list",
        default=None,
        help="where to write skipped-record report (default: <output>.skipped)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not os.path.isfile(args.input):
        print(f"error: input file not found: {args.input}", file=sys.stderr)
        return EXIT_USAGE
    if args.shards < 1:
        print(f"error: --shards must be >= 1, got {args.shards}", file=sys.stderr)
        return EXIT_USAGE
    out_dir = os.path.dirname(os.path.abspath(args.output))
    os.makedirs(out_dir, exist_ok=True)

    summary = run_annotation(
        args.input, args.output, shards=args.shards, skip_list_path=args.skip_list
    )
    for message in summary["schema_problems"]:
        print(message, file=sys.stderr)
    print(
        f"annotated {summary['annotated']}/{summary['records']} records"
        f" -> {args.output}"
    )
    if summary["skipped"]:
        skip_path = args.skip_list or args.output + ".skipped"
        print(
            f"skipped {summary['skipped']} record(s); see {skip_path}",
            file=sys.stderr,
        )
        return EXIT_SKIPS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
