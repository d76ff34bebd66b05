"""Command-line entry point.

Subcommands:
  classical  one Rips barcode per time step (the reference computation)
  deformed   one barcode of the time-deformed matrix, decoded per step
  compare    run both pipelines on the same input and verify they agree
  bench      wall-clock comparison of the two pipelines plus agreement check
  oracle     per-step cycle counts by dense Gaussian elimination only

Inputs come from sequence files (`--sequences`/`--metadata`), distance
matrices (`--matrix`/`--times`), or a seeded generator (`--n`/`--m`).
Reports go to standard output, diagnostics to standard error.  Exit codes:
0 success, 1 bad input, 2 an agreement or stability check failed.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .distance import TimeLabels
from .errors import InputError
from .io import InputBundle, emit_report, parse_matrix, parse_sequences
from .oracle import RandomInstanceSpec, random_instance, snv_counts_oracle
from .pipeline import (
    benchmark,
    classical_snv,
    deformed_snv,
    stability_report,
    verify_correspondence,
)

BENCH_DEFAULTS = RandomInstanceSpec(seed=0, n=50, m=12, d_max=4)


def parse_cap(text: str | None) -> int | str | None:
    """A cap is a natural number of scale units, or 'full' for no cap."""
    if text is None or text == "full":
        return text
    try:
        value = int(text)
    except ValueError:
        raise InputError(
            f"cap must be a natural number or 'full', got {text!r}"
        ) from None
    if value < 0:
        raise InputError(f"cap must be >= 0, got {value}")
    return value


def _check_prime(p: int) -> None:
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise InputError(f"--prime must be a prime number, got {p}")


def _read(path: str) -> str:
    return Path(path).read_text()


def resolve_input(
    args: argparse.Namespace, default_spec: RandomInstanceSpec | None = None
) -> InputBundle:
    """Turn the input flags into a labelled distance space.

    Exactly one source is allowed: sequence files, matrix files, or the
    seeded generator.  ``default_spec`` supplies a generator fallback for
    subcommands that can run without explicit input (bench).
    """
    picked = [
        flag
        for flag, value in (
            ("--sequences", args.sequences),
            ("--matrix", args.matrix),
            ("--n", args.n),
        )
        if value is not None
    ]
    if len(picked) > 1:
        raise InputError(f"choose one input source, got {' and '.join(picked)}")

    if args.sequences is not None:
        if args.metadata is None:
            raise InputError("--sequences requires --metadata")
        return parse_sequences(
            _read(args.sequences),
            _read(args.metadata),
            horizon=args.horizon,
            sources=(args.sequences, args.metadata),
        )
    if args.matrix is not None:
        if args.times is None:
            raise InputError("--matrix requires --times")
        return parse_matrix(
            _read(args.matrix),
            _read(args.times),
            horizon=args.horizon,
            sources=(args.matrix, args.times),
        )

    if args.n is not None or args.m is not None:
        if args.n is None or args.m is None:
            raise InputError("generated instances need both --n and --m")
        spec = RandomInstanceSpec(seed=args.seed, n=args.n, m=args.m, d_max=args.dmax)
    elif default_spec is not None:
        spec = default_spec
    else:
        raise InputError(
            "no input given; use --sequences/--metadata, --matrix/--times, or --n/--m"
        )
    space, labels = random_instance(spec)
    if args.horizon is not None:
        if args.horizon < labels.m:
            raise InputError(
                f"horizon {args.horizon} is below the largest time label "
                f"{labels.m}; it may only extend the series"
            )
        labels = TimeLabels(args.horizon, labels.by_id)
    return InputBundle(
        "generated",
        space,
        labels,
        sources=(f"seed={spec.seed} n={spec.n} m={spec.m} d_max={spec.d_max}",),
    )


def _attach_provenance(report, bundle: InputBundle) -> None:
    report.merges = bundle.merges
    report.notes = bundle.notes + report.notes


def _cmd_classical(args: argparse.Namespace) -> int:
    bundle = resolve_input(args)
    cap = parse_cap(args.cap)
    report = classical_snv(
        bundle.space,
        bundle.labels,
        p=args.prime,
        cap=None if cap == "full" else cap,
        threads=args.threads,
    )
    _attach_provenance(report, bundle)
    sys.stdout.write(emit_report(report, args.format))
    return 0


def _cmd_deformed(args: argparse.Namespace) -> int:
    bundle = resolve_input(args)
    report = deformed_snv(
        bundle.space, bundle.labels, p=args.prime, cap=parse_cap(args.cap)
    )
    _attach_provenance(report, bundle)
    stab = stability_report(report) if args.stability else None
    sys.stdout.write(emit_report(report, args.format, stability=stab))
    if stab is not None and not stab.ok:
        for line in stab.violations:
            print(f"stability violation: {line}", file=sys.stderr)
        return 2
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    bundle = resolve_input(args)
    cap = parse_cap(args.cap)
    # The cap applies to the classical side only; the deformed run keeps its
    # default so the per-step decoding stays intact.
    classical = classical_snv(
        bundle.space,
        bundle.labels,
        p=args.prime,
        cap=None if cap == "full" else cap,
        threads=args.threads,
    )
    deformed = deformed_snv(bundle.space, bundle.labels, p=args.prime)
    verdict = verify_correspondence(classical, deformed)
    sys.stdout.write(emit_report(verdict, args.format))
    if verdict.discrepancies:
        for line in verdict.discrepancies:
            print(f"discrepancy: {line}", file=sys.stderr)
        if args.strict:
            return 2
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    bundle = resolve_input(args, default_spec=BENCH_DEFAULTS)
    result = benchmark(
        bundle.space,
        bundle.labels,
        p=args.prime,
        repetitions=args.repetitions,
        threads=args.threads,
    )
    sys.stdout.write(emit_report(result, args.format))
    if not result.correspondence_clean:
        print("benchmark correspondence check failed", file=sys.stderr)
        return 2
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    bundle = resolve_input(args)
    counts = snv_counts_oracle(bundle.space, bundle.labels, args.prime)
    if args.format == "json":
        doc = {
            "mode": "oracle",
            "m": bundle.labels.m,
            "p": args.prime,
            "per_step_counts": counts,
        }
        sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    else:
        sys.stdout.write("".join(f"{i}\t{c}\n" for i, c in enumerate(counts)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("input")
    src.add_argument("--sequences", help="fasta-like sequence file")
    src.add_argument("--metadata", help="id/time table, tab or comma separated")
    src.add_argument("--matrix", help="strict lower-triangular integer distance file")
    src.add_argument("--times", help="newline-separated time vector file")
    src.add_argument(
        "--n", type=int, help="generate a seeded random instance with this many points"
    )
    src.add_argument("--m", type=int, help="largest time label for generated instances")
    src.add_argument(
        "--dmax", type=int, default=4, help="largest generated distance (default 4)"
    )
    src.add_argument("--seed", type=int, default=0, help="generator seed (default 0)")
    src.add_argument(
        "--horizon",
        type=int,
        help="extend the time horizon beyond the largest label present",
    )
    common.add_argument(
        "--prime", type=int, default=2, help="coefficient field F_p (default 2)"
    )
    common.add_argument(
        "--format", choices=("json", "tsv"), default="json", help="output format"
    )
    common.add_argument(
        "--threads", type=int, default=1, help="worker threads for per-step runs"
    )

    parser = argparse.ArgumentParser(
        prog="snvrips",
        description="Per-time-step SNV cycles from one deformed Rips barcode.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    classical = sub.add_parser(
        "classical", parents=[common], help="one barcode per time step"
    )
    classical.add_argument(
        "--cap",
        help="scale cap: natural number or 'full' (default: each step's diameter)",
    )
    classical.set_defaults(handler=_cmd_classical)

    deformed = sub.add_parser(
        "deformed", parents=[common], help="single barcode of the deformed matrix"
    )
    deformed.add_argument(
        "--cap",
        help="scaled-value cap: natural number or 'full' (default 2N-1)",
    )
    deformed.add_argument(
        "--stability",
        action="store_true",
        help="append the per-bar step membership table",
    )
    deformed.set_defaults(handler=_cmd_deformed)

    compare = sub.add_parser(
        "compare", parents=[common], help="run both pipelines and verify agreement"
    )
    compare.add_argument(
        "--cap", help="classical-side scale cap (the deformed side keeps its default)"
    )
    compare.add_argument(
        "--strict", action="store_true", help="exit with status 2 on any discrepancy"
    )
    compare.set_defaults(handler=_cmd_compare)

    bench = sub.add_parser(
        "bench",
        parents=[common],
        help="time classical vs deformed (default instance: seed 0, n=50, m=12)",
    )
    bench.add_argument(
        "--repetitions", type=int, default=1, help="timing repetitions (default 1)"
    )
    bench.set_defaults(handler=_cmd_bench)

    oracle = sub.add_parser(
        "oracle", parents=[common], help="per-step counts by dense elimination"
    )
    oracle.set_defaults(handler=_cmd_oracle)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _check_prime(args.prime)
        if args.threads < 1:
            raise InputError(f"--threads must be >= 1, got {args.threads}")
        return args.handler(args)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
