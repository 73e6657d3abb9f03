"""Command line front end for the optimizer comparison."""

from __future__ import annotations

import argparse
import sys

from .bench import (
    BenchParams,
    DEFAULT_SEPARATION,
    EXIT_DATA,
    EXIT_USAGE,
    run_experiment,
)
from .datasets import DataFormatError


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # Funnel every argparse failure into one exception so the exit code is ours.
    def error(self, message):
        raise _UsageError(message)


def _parse_bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true/false, got {value!r}")


def _parse_hidden(value: str) -> tuple[int, ...]:
    try:
        widths = tuple(int(part) for part in value.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated ints, got {value!r}")
    if not widths or any(w < 1 for w in widths):
        raise argparse.ArgumentTypeError(f"hidden widths must be positive, got {value!r}")
    return widths


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="poswise-bench",
        description=(
            "Train one network with batch gradient descent and a bit-identical "
            "copy with the position-wise optimizer, then report epochs-to-threshold, "
            "wall time, and the loss curves (CSV, JSON, SVG, PNG)."
        ),
    )
    parser.add_argument("--dataset", choices=["mnist", "cifar10", "synthetic"], default="synthetic")
    parser.add_argument("--data-dir", default=".", help="directory holding MNIST IDX / CIFAR-10 bin files")
    parser.add_argument("--subsample", type=int, default=None, metavar="N",
                        help="stratified subset size (deterministic in --seed)")
    parser.add_argument("--hidden", type=_parse_hidden, default=None, metavar="CSV",
                        help="hidden layer widths, default 20,7,5")
    parser.add_argument("--lr", type=float, default=None,
                        help="learning rate (default 0.5 binary, 0.1 multi-class)")
    parser.add_argument("--threshold", type=float, default=None,
                        help="stop when end-of-epoch loss falls below this (per-dataset default)")
    parser.add_argument("--max-epochs", type=int, default=5000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--loss", choices=["auto", "bce", "amsoftmax"], default="auto")
    parser.add_argument("--margin", type=float, default=0.35, help="amsoftmax additive margin")
    parser.add_argument("--scale", type=float, default=30.0, help="amsoftmax logit scale")
    parser.add_argument("--refresh-mode", choices=["suffix", "literal"], default="suffix")
    parser.add_argument("--train-bias", type=_parse_bool, default=True, metavar="BOOL")
    parser.add_argument("--optimizer", choices=["gd", "poswise", "both"], default="both")
    parser.add_argument("--out", default="out", metavar="DIR")
    parser.add_argument("--separation", type=float, default=DEFAULT_SEPARATION,
                        help="cluster center distance of the synthetic dataset")
    return parser


def params_from_args(args: argparse.Namespace) -> BenchParams:
    params = BenchParams(
        dataset=args.dataset,
        data_dir=args.data_dir,
        subsample=args.subsample,
        lr=args.lr,
        threshold=args.threshold,
        max_epochs=args.max_epochs,
        seed=args.seed,
        loss=args.loss,
        margin=args.margin,
        scale=args.scale,
        refresh_mode=args.refresh_mode,
        train_bias=args.train_bias,
        optimizer=args.optimizer,
        out=args.out,
        separation=args.separation,
    )
    if args.hidden is not None:
        params.hidden = args.hidden
    return params


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _validate(args)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        _report, code = run_experiment(params_from_args(args))
    except (DataFormatError, OSError) as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    return code


def _validate(args: argparse.Namespace):
    if args.max_epochs < 1:
        raise _UsageError(f"--max-epochs must be >= 1, got {args.max_epochs}")
    if args.lr is not None and not args.lr > 0:
        raise _UsageError(f"--lr must be > 0, got {args.lr}")
    if args.subsample is not None and args.subsample < 1:
        raise _UsageError(f"--subsample must be >= 1, got {args.subsample}")
    if args.seed < 0:
        raise _UsageError(f"--seed must be >= 0, got {args.seed}")


if __name__ == "__main__":
    sys.exit(main())
