"""Command line entry point: one subcommand per figure kind."""

from __future__ import annotations

import argparse
import sys

from .figures import plot_condition, plot_convergence, plot_heatmap
from .schemas import SchemaError


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="biharm2d-plots",
        description="Render biharm2d CSV artifacts into figures.")
    sub = p.add_subparsers(dest="command", required=True)

    conv = sub.add_parser("convergence", help="semilog-y error decay")
    cond = sub.add_parser("condition", help="log-log condition comparison")
    heat = sub.add_parser("heatmap", help="masked field/error heatmap")
    for s in (conv, cond, heat):
        s.add_argument("input", help="input CSV path")
        s.add_argument("output", help="output image path (png/svg)")
        s.add_argument("--title", default=None)
    heat.add_argument("--column", default="w",
                      choices=["w", "w_ref", "abs_err"])
    heat.add_argument("--log-scale", action="store_true")
    heat.add_argument("--no-loads", action="store_true",
                      help="do not mark point loads from the sidecar")
    return p


def cli_main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "convergence":
            out = plot_convergence(args.input, args.output,
                                   **({"title": args.title} if args.title
                                      else {}))
        elif args.command == "condition":
            out = plot_condition(args.input, args.output,
                                 **({"title": args.title} if args.title
                                    else {}))
        else:
            out = plot_heatmap(args.input, args.output, column=args.column,
                               title=args.title, log_scale=args.log_scale,
                               mark_loads=not args.no_loads)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


def main() -> None:
    raise SystemExit(cli_main())
