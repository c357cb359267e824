"""Command-line front end.

Subcommands: run-train, run-baseline, run-sweep, eval-checkpoint. Exit codes:
0 success, 2 configuration error, 3 runtime or numerical error.
"""

import argparse
import logging
import sys

from .config import PROFILES, load_config
from .errors import ConfigError, NumericsError
from .experiments import (
    BASELINE_POLICIES,
    SWEEP_AXES,
    eval_checkpoint,
    run_baseline,
    run_sweep,
    run_train,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3


def _add_common_flags(parser):
    parser.add_argument("--config", metavar="PATH", default=None,
                        help="key=value config file layered over the profile")
    parser.add_argument("--profile", choices=sorted(PROFILES), default="paper",
                        help="base parameter profile (default: paper)")
    parser.add_argument("--seed", type=int, default=None,
                        help="master seed; required unless the config file sets one")
    parser.add_argument("--elements", type=int, default=None,
                        help="number of reflecting elements N")
    parser.add_argument("--users", type=int, default=None,
                        help="number of downlink users K")
    parser.add_argument("--power-db", type=float, default=None,
                        help="transmit power in dB")
    parser.add_argument("--episodes", type=int, default=None,
                        help="training episodes J")
    parser.add_argument("--steps", type=int, default=None,
                        help="steps per episode T")
    parser.add_argument("--out", metavar="DIR", default=None,
                        help="output directory for run artifacts")
    parser.add_argument("--force", action="store_true",
                        help="allow writing into a non-empty output directory")
    parser.add_argument("--trace", action="store_true",
                        help="also export a per-step trace CSV of the final evaluation")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="irsuav",
        description="Train and evaluate a reflector-equipped-relay downlink optimizer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("run-train", help="full training run with final evaluation")
    _add_common_flags(p_train)

    p_base = sub.add_parser("run-baseline", help="fixed-policy baseline run")
    _add_common_flags(p_base)
    p_base.add_argument("--policy", choices=BASELINE_POLICIES, default="random",
                        help="baseline policy (default: random)")

    p_sweep = sub.add_parser("run-sweep", help="train once per axis value and aggregate")
    _add_common_flags(p_sweep)
    p_sweep.add_argument("--axis", choices=sorted(SWEEP_AXES), required=True,
                         help="which parameter the sweep varies")
    p_sweep.add_argument("--values", nargs="+", required=True, metavar="V",
                         help="axis values, one run per value")

    p_eval = sub.add_parser("eval-checkpoint", help="evaluate a saved agent")
    _add_common_flags(p_eval)
    p_eval.add_argument("--checkpoint", metavar="PATH", required=True,
                        help="tensor archive written by a training run")
    p_eval.add_argument("--eval-episodes", type=int, default=None,
                        help="number of evaluation episodes")
    return parser


def _config_from_args(args):
    overrides = {
        "master_seed": args.seed,
        "n_elements": args.elements,
        "n_users": args.users,
        "power_db": args.power_db,
        "episodes": args.episodes,
        "steps_per_episode": args.steps,
        "out_dir": args.out,
    }
    return load_config(profile=args.profile, config_path=args.config,
                       overrides=overrides)


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s",
                        stream=sys.stderr)
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run-train":
            summary = run_train(_config_from_args(args), force=args.force,
                                trace=args.trace)
            print(f"mean_sum_rate={summary['mean_sum_rate']}")
        elif args.command == "run-baseline":
            summary = run_baseline(_config_from_args(args), args.policy,
                                   force=args.force, trace=args.trace)
            print(f"mean_sum_rate={summary['mean_sum_rate']}")
        elif args.command == "run-sweep":
            summary = run_sweep(_config_from_args(args), args.axis, args.values,
                                force=args.force)
            for value, optimized, baseline in summary["rows"]:
                print(f"{value}: optimized={optimized} baseline={baseline}")
        elif args.command == "eval-checkpoint":
            summary = eval_checkpoint(args.checkpoint, args.out,
                                      force=args.force, master_seed=args.seed,
                                      eval_episodes=args.eval_episodes,
                                      trace=args.trace)
            print(f"mean_sum_rate={summary['mean_sum_rate']}")
        else:  # pragma: no cover - argparse enforces the choices
            raise ConfigError(f"command: unknown subcommand {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericsError, OSError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
