"""Command-line entry point: sample, verify, bench, oracle, enumerate, stat.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import Sequence

from .. import oracle
from ..discrete import SAMPLERS as DPLUS_SAMPLERS, SigmaParam
from ..normal import ALGORITHMS
from ..randcore import DIGIT_SIZES, MAX_SEED, RandomSource, truncated_bits
from .bench import BenchConfig, run_bench, write_csv
from .enumeration import FIXTURES, MAX_DEPTH, enumerate_exact
from .stats import stat_chi2_dgauss, stat_ks_normal
from .verify import SUITES, default_seeds, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MIN_VERIFY_N = 100_000
SAMPLE_CSV_HEADER = ["sign", "k", "frac_bits_hex", "precision", "value"]


class UsageError(Exception):
    pass


def dyadic_decimal(numerator: int, precision: int) -> str:
    """Exact decimal expansion of numerator / 2**precision."""
    sign = "-" if numerator < 0 else ""
    scaled = abs(numerator) * 5**precision
    whole, frac = divmod(scaled, 10**precision)
    digits = str(frac).rjust(precision, "0").rstrip("0")
    return f"{sign}{whole}.{digits or '0'}"


def sample_record(s, precision: int) -> dict:
    m = truncated_bits(s.frac, precision)
    width = (precision + 3) // 4
    return {
        "sign": s.sign,
        "k": s.k,
        "frac_bits_hex": format(m, f"0{width}x"),
        "precision": precision,
        "value": dyadic_decimal(s.sign * ((s.k << precision) + m), precision),
    }


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= v < MAX_SEED:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> int:
    try:
        v = int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _sigma(text: str) -> SigmaParam:
    try:
        return SigmaParam.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def cmd_sample(args, out) -> int:
    src = RandomSource(args.seed, args.bits)
    if args.distribution == "dgauss":
        sample = DPLUS_SAMPLERS[args.variant]
        if args.format == "jsonl":
            for _ in range(args.n):
                out.write(json.dumps({"k": sample(args.sigma, src).value}) + "\n")
        else:
            out.write("k\n")
            for _ in range(args.n):
                out.write(f"{sample(args.sigma, src).value}\n")
        return EXIT_OK
    sample = ALGORITHMS[args.algorithm]
    writer = None
    if args.format == "csv":
        writer = csv.DictWriter(out, fieldnames=SAMPLE_CSV_HEADER, lineterminator="\n")
        writer.writeheader()
    for _ in range(args.n):
        rec = sample_record(sample(src).sample, args.precision)
        if writer:
            writer.writerow(rec)
        else:
            out.write(json.dumps(rec) + "\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    if args.n < MIN_VERIFY_N:
        raise UsageError(f"--n must be at least {MIN_VERIFY_N}")
    seeds = default_seeds(args.seed, args.seeds)
    records = run_suite(args.suite, args.n, seeds)
    out.write(f"# suite={args.suite} n={args.n} seed={args.seed} shards={args.seeds}\n")
    for rec in records:
        out.write(rec.line() + "\n")
    hard_fail = [r for r in records if not r.passed and not r.soft]
    out.write(f"# {len(records) - len(hard_fail)}/{len(records)} rows within tolerance\n")
    return EXIT_FAIL if hard_fail else EXIT_OK


def cmd_bench(args, out) -> int:
    config = BenchConfig(
        algorithms=tuple(args.algorithm or BenchConfig.algorithms),
        digit_sizes=tuple(args.bits or DIGIT_SIZES),
        n=args.n,
        seed=args.seed,
        repeats=args.repeats,
    )
    write_csv(run_bench(config), out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    values = oracle.reference_constants()
    if not args.list:
        values = [v for v in values if v.name == args.name]
        if not values:
            raise UsageError(f"unknown oracle value {args.name!r}; try --list")
    for v in values:
        ref = "" if v.reference_value is None else f"{v.reference_value:g}"
        out.write(f"{v.name:<28} {v.value:.6f}  {v.method:<18} {ref:<10} {v.description}\n")
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    if args.depth > MAX_DEPTH:
        raise UsageError(f"--depth at most {MAX_DEPTH}")
    res = enumerate_exact(args.fixture, args.depth)
    out.write(f"# fixture={res.fixture} depth={res.depth} paths={res.paths} undecided={float(res.undecided):.6e}\n")
    for outcome, target in res.target.items():
        lo, hi = res.bounds(outcome)
        ok = lo <= target <= hi
        out.write(f"{str(outcome):<6} low={float(lo):.9f} high={float(hi):.9f} target={target:.9f} "
                  f"{'bracketed' if ok else 'NOT bracketed'}\n")
    return EXIT_OK if res.brackets() else EXIT_FAIL


def cmd_stat(args, out) -> int:
    if args.test == "chi2":
        result = stat_chi2_dgauss(DPLUS_SAMPLERS[args.variant], args.n, args.seed, args.sigma, args.bits)
    else:
        result = stat_ks_normal(ALGORITHMS[args.algorithm], args.n, args.seed, args.precision, args.bits)
    dof = "" if result.dof is None else f" dof={result.dof}"
    out.write(f"{'PASS' if result.passed else 'FAIL'}  {result.name} statistic={result.statistic:.6g} "
              f"critical={result.critical:.6g} n={result.n} seed={result.seed}{dof}\n")
    return EXIT_OK if result.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="exactgauss", description="Exact Gaussian sampling toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, n_default, bits_default=16):
        sp.add_argument("--seed", type=_seed, default=1, help="unsigned 64-bit seed")
        sp.add_argument("--n", type=_positive, default=n_default)
        sp.add_argument("--bits", type=int, choices=DIGIT_SIZES, default=bits_default, help="digit size")

    sp = sub.add_parser("sample", help="emit finalized samples")
    sp.add_argument("distribution", choices=("normal", "dgauss"))
    sp.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="improved")
    sp.add_argument("--variant", choices=sorted(DPLUS_SAMPLERS), default="improved")
    sp.add_argument("--sigma", type=_sigma, default=SigmaParam.parse("1"), help="NUM/DEN")
    sp.add_argument("--precision", type=_positive, default=53, help="fraction bits to output")
    sp.add_argument("--format", choices=("csv", "jsonl"), default="jsonl")
    common(sp, 10)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("verify", help="predicted vs measured cost table")
    sp.add_argument("suite", choices=SUITES + ("all",))
    sp.add_argument("--seed", type=_seed, default=1)
    sp.add_argument("--n", type=_positive, default=1_000_000)
    sp.add_argument("--seeds", type=_positive, default=5, help="number of derived seed shards")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("bench", help="throughput table as CSV")
    sp.add_argument("--algorithm", action="append", choices=sorted(ALGORITHMS))
    sp.add_argument("--bits", type=int, action="append", choices=DIGIT_SIZES)
    sp.add_argument("--n", type=_positive, default=BenchConfig.n)
    sp.add_argument("--seed", type=_seed, default=1)
    sp.add_argument("--repeats", type=_positive, default=BenchConfig.repeats)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("oracle", help="print analytic reference values")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("name", nargs="?")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("enumerate", help="exhaustive bit-tree bounds")
    sp.add_argument("fixture", choices=sorted(FIXTURES))
    sp.add_argument("--depth", type=int, default=24)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("stat", help="goodness-of-fit test")
    sp.add_argument("test", choices=("chi2", "ks"))
    sp.add_argument("--algorithm", choices=sorted(ALGORITHMS), default="improved")
    sp.add_argument("--variant", choices=sorted(DPLUS_SAMPLERS), default="improved")
    sp.add_argument("--sigma", type=_sigma, default=SigmaParam.parse("1"))
    sp.add_argument("--precision", type=_positive, default=53)
    common(sp, 100_000)
    sp.set_defaults(func=cmd_stat)
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
