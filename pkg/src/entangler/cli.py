"""Command-line entry point: ``entangler <experiment> --config c.json --out dir``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import __version__, experiments
from .errors import ConfigError, NumericalError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entangler",
        description=(
            "Run a named experiment of the dissipative entanglement simulator "
            "and write CSV result tables plus a JSON metadata sidecar."
        ),
    )
    parser.add_argument("--version", action="version", version=f"entangler {__version__}")
    parser.add_argument(
        "experiment",
        choices=experiments.EXPERIMENT_NAMES,
        help="which experiment to run",
    )
    parser.add_argument(
        "--config",
        help="JSON config file; omitted fields take experiment defaults",
    )
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--workers", type=int, help="parallel worker count override")
    parser.add_argument("--seed", type=int, help="seed override")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config:
            config = experiments.load_config(args.config, args.experiment)
        else:
            config = experiments.config_from_dict({"experiment": args.experiment})
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("--workers must be >= 1")
            config = replace(config, workers=args.workers)
        if args.seed is not None:
            config = replace(config, seed=args.seed)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        result = experiments.run_experiment(config)
        paths = experiments.write_outputs(result, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
