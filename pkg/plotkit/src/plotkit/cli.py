"""Command-line front end.

Subcommands: convergence (training curves from per-run metric CSVs) and sweep
(optimized-vs-baseline comparison from aggregated CSVs). Exit codes: 0
success, 2 bad request or bad input data, 3 runtime error.
"""

import argparse
import sys

from .plotspec import PlotInputError, make_spec
from .render import plot_convergence, plot_sweep

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_RUNTIME = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render training-run CSV artifacts as static PNG figures.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_conv = sub.add_parser("convergence",
                            help="one curve per metrics CSV, optionally smoothed")
    p_conv.add_argument("--csv", nargs="+", required=True, metavar="PATH",
                        help="per-run metric tables, one curve each")
    p_conv.add_argument("--labels", nargs="+", default=None, metavar="NAME",
                        help="legend labels, one per CSV (default: file stems)")
    p_conv.add_argument("--out", required=True, metavar="PNG",
                        help="output image path")
    p_conv.add_argument("--smooth", type=int, default=1, metavar="W",
                        help="trailing moving-average window in episodes "
                             "(default: 1, no smoothing)")
    p_conv.add_argument("--x", default="episode", metavar="COL",
                        help="x column (default: episode)")
    p_conv.add_argument("--y", default="accumulated_reward", metavar="COL",
                        help="y column (default: accumulated_reward)")

    p_sweep = sub.add_parser("sweep",
                             help="optimized and baseline curves against a sweep axis")
    p_sweep.add_argument("--csv", nargs="+", required=True, metavar="PATH",
                         help="aggregated sweep tables, one curve pair each")
    p_sweep.add_argument("--labels", nargs="+", default=None, metavar="NAME",
                         help="series name prefixes when several CSVs overlay")
    p_sweep.add_argument("--out", required=True, metavar="PNG",
                         help="output image path")
    p_sweep.add_argument("--x", default="axis_value", metavar="COL",
                         help="x column (default: axis_value)")
    p_sweep.add_argument("--y", default="mean_sum_rate", metavar="COL",
                         help="optimized column (default: mean_sum_rate)")
    p_sweep.add_argument("--baseline", default="baseline_sum_rate", metavar="COL",
                         help="baseline column (default: baseline_sum_rate)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "convergence":
            spec = make_spec(args.csv, args.out, x_column=args.x,
                             y_column=args.y, labels=args.labels,
                             smooth_window=args.smooth)
            result = plot_convergence([spec])[0]
        else:
            spec = make_spec(args.csv, args.out, x_column=args.x,
                             y_column=args.y, labels=args.labels)
            result = plot_sweep(spec, baseline_column=args.baseline)
        print(f"wrote {result.out_path} ({result.width_px}x{result.height_px} "
              f"px, {len(result.series)} series)")
    except PlotInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
