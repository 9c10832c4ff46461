"""Command line interface: ``wheelsieve {list,count,verify,bench}``.

Exit codes: 0 success, 1 verification failure, 2 bad arguments, 3 I/O error,
4 resource exhaustion (memory budget or allocation failure).
"""

from __future__ import annotations

import argparse
import contextlib
import os
import struct
import sys
from decimal import Decimal, InvalidOperation

from . import bench, oracle
from .sieve_core import ENGINES, TABLE_ORDER, ResourceError, get_engine, track_bytes

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_RESOURCE = 4

SUNDARAM_SWEEP = 500


class _BudgetExceeded(Exception):
    pass


def parse_limit(text: str) -> int:
    """Non-negative integer, decimal or scientific (``1e6``, ``2e9``, ``2.5e3``)."""
    try:
        d = Decimal(text.strip().replace("_", ""))
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not d.is_finite() or d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    n = int(d)
    if n < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return n


def parse_range(text: str) -> tuple[int, int]:
    """``lo:hi`` inclusive."""
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    a, b = parse_limit(lo), parse_limit(hi)
    if a > b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def parse_limit_ladder(text: str) -> tuple[int, ...]:
    """``1e3:1e6`` is every power of ten in between; ``1e3,5e3,1e4`` is taken as listed."""
    if ":" in text:
        lo, hi = parse_range(text)
        if lo < 1:
            raise argparse.ArgumentTypeError("ladder must start at >= 1")
        out = []
        n = lo
        while n <= hi:
            out.append(n)
            n *= 10
        return tuple(out)
    return tuple(parse_limit(part) for part in text.split(",") if part.strip())


def parse_algos(text: str) -> tuple[str, ...]:
    names = tuple(s.strip() for s in text.split(",") if s.strip())
    for name in names:
        if name not in ENGINES:
            raise argparse.ArgumentTypeError(f"unknown engine {name!r}")
    if not names:
        raise argparse.ArgumentTypeError("no engines given")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wheelsieve", description="Wheel-factorized prime sieves.")
    sub = parser.add_subparsers(dest="command", required=True)

    engine_help = f"engine: {', '.join(TABLE_ORDER)} (default d2soe)"

    p = sub.add_parser("list", help="print the primes up to a limit")
    p.add_argument("--limit", "-n", type=parse_limit, required=True)
    p.add_argument("--algo", choices=sorted(ENGINES), default="d2soe", help=engine_help)
    p.add_argument("--format", choices=("text", "csv", "json", "binary"), default="text")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")

    p = sub.add_parser("count", help="print how many primes are <= a limit")
    p.add_argument("--limit", "-n", type=parse_limit, required=True)
    p.add_argument("--algo", choices=sorted(ENGINES), default="d2soe", help=engine_help)

    p = sub.add_parser("verify", help="cross-check engines and index identities")
    p.add_argument("--max-n", type=parse_limit, default=10**6,
                   help="largest limit for the engine cross-check ladder (default 1e6)")
    p.add_argument("--f1-range", type=parse_range, default=(1, 10**7),
                   help="inclusive lo:hi range for the f1 = 2p check (default 1:1e7)")
    p.add_argument("--sundaram-max", type=parse_limit, default=10**5,
                   help=f"largest limit for the Sundaram equivalence check (default 1e5, cap {oracle.SUNDARAM_CAP})")

    p = sub.add_parser("bench", help="time the engines over a ladder of limits")
    p.add_argument("--limits", type=parse_limit_ladder, default=bench.DEFAULT_LIMITS,
                   help="lo:hi powers-of-ten ladder or comma list (default 1e3:1e8)")
    p.add_argument("--algos", type=parse_algos, default=TABLE_ORDER)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--warmups", type=int, default=2)
    p.add_argument("--sink", choices=bench.SINKS, default="count")
    p.add_argument("--format", choices=("text", "csv", "json"), default="text")
    p.add_argument("--memory-budget", type=bench.parse_bytes, default=None,
                   help=f"largest track to allocate, e.g. 512M (default ${bench.MEMORY_BUDGET_ENV} or 4G)")
    return parser


def _check_budget(algo: str, N: int) -> None:
    need = track_bytes(algo, N)
    budget = bench.memory_budget_from_env()
    if need > budget:
        raise _BudgetExceeded(f"{algo} at N={N} needs {need} bytes, budget is {budget}")


@contextlib.contextmanager
def _open_out(path, binary: bool):
    if path is None:
        yield sys.stdout.buffer if binary else sys.stdout
        return
    with open(path, "wb" if binary else "w") as fh:
        yield fh


def cmd_list(args) -> int:
    _check_budget(args.algo, args.limit)
    stream = get_engine(args.algo)(args.limit)
    binary = args.format == "binary"
    with _open_out(args.output, binary) as out:
        if binary:
            out.write(struct.pack("<Q", stream.count()))
            for chunk in stream.chunks():
                out.write(chunk.astype("<u8").tobytes())
        elif args.format == "text":
            first = True
            for chunk in stream.chunks():
                out.write(("" if first else " ") + " ".join(map(str, chunk.tolist())))
                first = False
            if not first:
                out.write("\n")
        elif args.format == "csv":
            out.write("prime\n")
            for chunk in stream.chunks():
                out.write("".join(f"{v}\n" for v in chunk.tolist()))
        else:
            out.write("[")
            first = True
            for chunk in stream.chunks():
                out.write(("" if first else ",") + ",".join(map(str, chunk.tolist())))
                first = False
            out.write("]\n")
        out.flush()
    return EXIT_OK


def cmd_count(args) -> int:
    _check_budget(args.algo, args.limit)
    print(get_engine(args.algo)(args.limit).count())
    return EXIT_OK


def _ladder(max_n: int) -> list[int]:
    out = [n for n in (0, 1, 2, 3, 4, 5, 23) if n <= max_n]
    n = 10
    while n <= max_n:
        out.append(n)
        n *= 10
    if max_n not in out:
        out.append(max_n)
    return sorted(set(out))


def cmd_verify(args) -> int:
    reports = []
    for N in _ladder(args.max_n):
        reports.append(oracle.cross_check(N))
        print(reports[-1].summary(), flush=True)

    lo, hi = args.f1_range
    reports.append(oracle.verify_f1_identity(lo, hi))
    print(reports[-1].summary(), flush=True)

    top = min(args.sundaram_max, oracle.SUNDARAM_CAP)
    if top >= 2:
        sweep = [oracle.verify_sundaram_equivalence(N) for N in range(2, min(top, SUNDARAM_SWEEP) + 1)]
        merged = oracle.VerificationReport(
            "sundaram = d1soe", (2, min(top, SUNDARAM_SWEEP)),
            [(r.detail.split()[0],) + f for r in sweep for f in r.failures],
            sum(r.elapsed for r in sweep),
            detail=f"sweep over {len(sweep)} limits",
        )
        reports.append(merged)
        print(merged.summary(), flush=True)
        N = 1000
        while N <= top:
            reports.append(oracle.verify_sundaram_equivalence(N))
            print(reports[-1].summary(), flush=True)
            N *= 10
    ok = all(r.passed for r in reports)
    print("ALL PASS" if ok else "VERIFICATION FAILED")
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def cmd_bench(args) -> int:
    try:
        config = bench.BenchConfig(
            limits=args.limits, algorithms=args.algos, repeats=args.repeats,
            warmups=args.warmups, sink=args.sink, memory_budget=args.memory_budget,
        )
    except ValueError as exc:
        print(f"wheelsieve bench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    records = bench.run_suite(config)
    render = {"text": bench.render_text, "csv": bench.render_csv, "json": bench.render_jsonl}
    sys.stdout.write(render[args.format](records))
    for r in records:
        if r.is_skipped:
            print(f"skipped {r.algorithm} N={r.limit_N}: {r.skipped}", file=sys.stderr)
    if all(r.is_skipped for r in records):
        return EXIT_RESOURCE
    return EXIT_OK


COMMANDS = {"list": cmd_list, "count": cmd_count, "verify": cmd_verify, "bench": cmd_bench}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except _BudgetExceeded as exc:
        print(f"wheelsieve: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (MemoryError, ResourceError) as exc:
        print(f"wheelsieve: out of memory: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except BrokenPipeError:
        # reader went away (e.g. piped into head)
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK
    except OSError as exc:
        print(f"wheelsieve: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"wheelsieve: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
