"""Command line front end: ``ostrunc {sample,regions,cdf,validate,bench}``.

Exit codes: 0 success, 1 usage or input error, 2 infeasible bounds,
3 rejection budget exhausted, 4 a validation gate failed.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys
from typing import IO, Iterator, Sequence

from ostrunc import oracle
from ostrunc.analysis import BenchRow, bench_compare, bounds_for_area, validate
from ostrunc.errors import BudgetExceeded, CapacityError, InfeasibleError, SpecError
from ostrunc.problem import Problem, load_spec
from ostrunc.regions import build_table
from ostrunc.sampler import DEFAULT_BUDGET, draw_many

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_BUDGET, EXIT_GATE = 0, 1, 2, 3, 4

U64_MAX = 2**64 - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(v: object) -> str:
    """Reals with 17 significant digits so they round-trip exactly."""
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _bound(text: str) -> float:
    token = text.strip().lower()
    if token in ("inf", "+inf"):
        return math.inf
    if token == "-inf":
        return -math.inf
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or inf/-inf, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _int_list(text: str) -> list[int]:
    return [_positive(v) for v in text.split(",") if v.strip()]


@contextlib.contextmanager
def _output(path: str | None) -> Iterator[IO[str]]:
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise UsageError(f"cannot write output {path}: {exc.strerror}") from None
    with fh:
        yield fh


def _problem(args: argparse.Namespace) -> Problem:
    try:
        problem = load_spec(args.spec)
    except OSError as exc:
        raise UsageError(f"cannot read spec {args.spec}: {exc.strerror}") from None
    lower = getattr(args, "lower", None)
    upper = getattr(args, "upper", None)
    if lower is not None or upper is not None:
        problem = problem.with_bounds(lower, upper)
    return problem


def _writer(fh: IO[str]) -> csv.writer:
    return csv.writer(fh, lineterminator="\n")


def cmd_sample(args: argparse.Namespace) -> int:
    problem = _problem(args)
    batch = draw_many(problem, args.n, args.seed, args.method, budget=args.budget)
    n = problem.n
    header = ["y"]
    if args.trace:
        header += ["region"]
        header += [f"u{j}" for j in range(1, n + 1)]
        header += [f"uprime{j}" for j in range(1, n + 1)]
        header += [f"x{j}" for j in range(1, n + 1)]
    rejection = args.method == "rejection"
    if rejection:
        header.append("attempts")
    with _output(args.out) as fh:
        w = _writer(fh)
        w.writerow(header)
        ys = batch.y.tolist()
        if not args.trace and not rejection:
            w.writerows([fmt(y)] for y in ys)
            return EXIT_OK
        regions = batch.region.tolist()
        us, ups, xs = batch.u.tolist(), batch.u_prime.tolist(), batch.x.tolist()
        attempts = batch.attempts.tolist()
        for i, y in enumerate(ys):
            row = [fmt(y)]
            if args.trace:
                row.append("" if regions[i] < 0 else str(regions[i]))
                row += [fmt(v) for v in us[i]]
                row += [fmt(v) for v in ups[i]]
                row += [fmt(v) for v in xs[i]]
            if rejection:
                row.append(str(attempts[i]))
            w.writerow(row)
    return EXIT_OK


def cmd_regions(args: argparse.Namespace) -> int:
    table = build_table(_problem(args))
    with _output(args.out) as fh:
        w = _writer(fh)
        w.writerow(["index", "assignment", "volume", "fraction", "cumulative"])
        for i, code in enumerate(table.codes()):
            w.writerow([i, code, fmt(float(table.volumes[i])), fmt(float(table.fractions[i])),
                        fmt(float(table.cumulative[i]))])
    return EXIT_OK


def cmd_cdf(args: argparse.Namespace) -> int:
    problem = _problem(args)
    values = oracle.truncated_cdf(problem, args.at)
    w = _writer(sys.stdout)
    w.writerow(["y", "truncated_cdf"])
    for y, f in zip(args.at, [float(v) for v in values]):
        w.writerow([fmt(float(y)), fmt(f)])
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    problem = _problem(args)
    gates = validate(problem, args.n, args.seed, args.budget)
    for gate in gates:
        print(gate.line())
    ok = all(g.passed for g in gates)
    print("ALL GATES PASSED" if ok else "SOME GATES FAILED")
    return EXIT_OK if ok else EXIT_GATE


def cmd_bench(args: argparse.Namespace) -> int:
    problem = _problem(args)
    bounds = [bounds_for_area(problem, a) for a in args.areas]
    rows = bench_compare(problem, bounds, args.ns, args.seed, repeats=args.repeats,
                         budget=args.budget)
    seen = set()
    for row in rows:
        if row.method == "mapped" and row.bounds not in seen:
            seen.add(row.bounds)
            print(f"table {row.bounds}: area {row.pdf_area:.6g}, built in {row.table_s:.3g} s",
                  file=sys.stderr)
    with _output(args.out) as fh:
        w = _writer(fh)
        w.writerow(BenchRow.CSV_HEADER)
        for row in rows:
            w.writerow([fmt(v) for v in row.csv_fields()])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ostrunc",
        description="Sample the k-th order statistic of independent variates under bounds A < Y < B.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, bounds: bool = True) -> None:
        p.add_argument("--spec", required=True, help="problem document (JSON)")
        if bounds:
            p.add_argument("--lower", type=_bound, help="override the lower bound A")
            p.add_argument("--upper", type=_bound, help="override the upper bound B")

    p = sub.add_parser("sample", help="draw samples and write them as CSV")
    common(p)
    p.add_argument("--n", type=_positive, required=True, help="number of draws")
    p.add_argument("--seed", type=_seed, required=True, help="generator seed (unsigned 64-bit)")
    p.add_argument("--method", choices=("mapped", "rejection"), default="mapped",
                   help="sampling method (default: mapped)")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--trace", action="store_true",
                   help="add region, u, uprime and x columns")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                   help="rejection attempts allowed per draw (default: 1e8)")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("regions", help="print the region table as CSV")
    common(p)
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_regions)

    p = sub.add_parser("cdf", help="evaluate the exact truncated CDF")
    common(p)
    p.add_argument("--at", type=_float_list, required=True,
                   help="comma-separated points y1,y2,...")
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("validate", help="run the KS/DKW gates and print pass/fail")
    common(p)
    p.add_argument("--n", type=_positive, default=10_000, help="draws per method (default: 10000)")
    p.add_argument("--seed", type=_seed, required=True, help="generator seed (unsigned 64-bit)")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                   help="rejection attempts allowed per draw (default: 1e8)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="time mapped vs rejection sampling over target PDF areas")
    common(p, bounds=False)
    p.add_argument("--areas", type=_float_list, default=[0.9, 0.5, 0.1, 0.05, 0.01, 0.001],
                   help="target P(A<Y<B) values; bounds are centred on the median of Y")
    p.add_argument("--ns", type=_int_list, default=[1, 10, 100, 1000, 10000],
                   help="draw counts per cell")
    p.add_argument("--seed", type=_seed, required=True, help="generator seed (unsigned 64-bit)")
    p.add_argument("--repeats", type=_positive, default=3, help="timing repetitions (best kept)")
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET,
                   help="rejection attempts allowed per draw (default: 1e8)")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ostrunc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecError, CapacityError) as exc:
        print(f"ostrunc: invalid problem: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"ostrunc: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except BudgetExceeded as exc:
        print(f"ostrunc: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"ostrunc: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
