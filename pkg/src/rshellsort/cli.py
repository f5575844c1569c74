"""Command-line entry point: ``rshellsort <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import harness, oblivious
from .core import DEFAULT_C, ContractViolation, SortConfig
from .harness import EXIT_CONTRACT, EXIT_COUNTEREXAMPLE, EXIT_OK, EXIT_UNSORTED
from .prng import DEFAULT_SEED, parse_seed

log = logging.getLogger("rshellsort")


def _seed(text: str) -> int:
    if text.lower() in ("entropy", "random"):
        seed = int.from_bytes(os.urandom(8), "little")
        print(f"seed {seed:#018x}", file=sys.stderr)
        return seed
    try:
        return parse_seed(text)
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _length(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"length must be non-negative, got {value}")
    return value


def _config_args(p: argparse.ArgumentParser, seed_required: bool = False) -> None:
    p.add_argument(
        "--seed",
        type=_seed,
        required=seed_required,
        default=None if seed_required else DEFAULT_SEED,
        help="decimal or 0x-hex 64-bit seed, or 'entropy'",
    )
    p.add_argument("--c", type=_positive, default=DEFAULT_C, help="region repetitions C")
    p.add_argument(
        "--deterministic", action="store_true", help="identity region matching (no shuffle)"
    )


def _config(args) -> SortConfig:
    return SortConfig(args.c, not args.deterministic, args.seed)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rshellsort", description="Randomized Shellsort and its comparator networks."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sort", help="sort a file of newline-delimited int64 keys")
    _config_args(p)
    p.add_argument("--pad", action="store_true", help="allow lengths that are not powers of 2")
    p.add_argument("--retries", type=int, default=0, help="reseeded retries after a failed run")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_sort)

    p = sub.add_parser("trace", help="record the comparator trace of one run")
    p.add_argument("--n", type=_length, required=True)
    _config_args(p, seed_required=True)
    p.add_argument("-o", "--output", help="trace file (stdout if omitted)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("network", help="extract the comparator network for (n, seed)")
    p.add_argument("--n", type=_length, required=True)
    _config_args(p, seed_required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_network)

    p = sub.add_parser("verify", help="0-1 verification of a network or trace file")
    p.add_argument("--network", required=True)
    p.add_argument(
        "--bound",
        type=_positive,
        default=oblivious.EXHAUSTIVE_BOUND,
        help="largest n checked exhaustively; larger n is sampled",
    )
    p.add_argument("--samples", type=_positive, default=100_000)
    p.add_argument("--sample-seed", type=_seed, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("failure-rate", help="Monte-Carlo failure rate, CSV to stdout")
    p.add_argument("--n", type=_length, required=True)
    p.add_argument("--trials", type=_positive, required=True)
    _config_args(p, seed_required=True)
    p.set_defaults(func=cmd_failure_rate)

    p = sub.add_parser("bench", help="failure-rate sweep over several n and C, CSV")
    p.add_argument("--n", type=_length, nargs="+", required=True)
    p.add_argument("--c", type=_positive, nargs="+", default=[1, DEFAULT_C])
    p.add_argument("--trials", type=_positive, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--deterministic", action="store_true")
    p.add_argument("-o", "--output", help="CSV file (stdout if omitted)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("count", help="exact compare-exchange count for length n")
    p.add_argument("--n", type=_length, required=True)
    p.add_argument("--c", type=_positive, default=DEFAULT_C)
    p.set_defaults(func=cmd_count)
    return parser


def cmd_sort(args) -> int:
    status = harness.sort_file(args.input, args.output, _config(args), args.pad, args.retries)
    if status == EXIT_UNSORTED:
        print(
            f"error: randomized run left {args.input} unsorted; output not written "
            f"(try --retries or another --seed)",
            file=sys.stderr,
        )
    return status


def cmd_trace(args) -> int:
    trace = oblivious.record_trace(args.n, _config(args))
    text = oblivious.format_trace(trace)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_network(args) -> int:
    oblivious.write_network(args.output, oblivious.extract_network(args.n, _config(args)))
    return EXIT_OK


def cmd_verify(args) -> int:
    net = oblivious.read_network(args.network)
    if net.n <= args.bound:
        res = oblivious.verify_zero_one(net, bound=args.bound)
        print(f"n {net.n} comparators {len(net)} exhaustive inputs {res.inputs_checked}")
    else:
        res = oblivious.sample_zero_one(net, samples=args.samples, seed=args.sample_seed)
        print(
            f"n {net.n} comparators {len(net)} sampled inputs {res.inputs_checked} "
            f"failures {res.failures} failure_prob_upper_{res.confidence:g} {res.upper_bound:.3e}"
        )
    if res:
        print("sorts all binary inputs" if res.exhaustive else "no failing input sampled")
        return EXIT_OK
    print("counterexample " + " ".join(map(str, res.counterexample)))
    return EXIT_COUNTEREXAMPLE


def cmd_failure_rate(args) -> int:
    report = harness.monte_carlo(args.n, args.trials, _config(args), args.seed)
    harness.write_csv([report], sys.stdout)
    for seed in report.failed_seeds:
        print(f"failed seed {seed:#018x}", file=sys.stderr)
    return EXIT_OK


def cmd_bench(args) -> int:
    reports = harness.bench(args.n, args.c, args.trials, args.seed, not args.deterministic)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            harness.write_csv(reports, fh)
    else:
        harness.write_csv(reports, sys.stdout)
    return EXIT_OK


def cmd_count(args) -> int:
    print(harness.count_comparisons(args.n, SortConfig(c_repetitions=args.c)))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; 2 is reserved for unsorted output here.
        return EXIT_CONTRACT if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s"
    )
    try:
        return args.func(args)
    except (ContractViolation, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
