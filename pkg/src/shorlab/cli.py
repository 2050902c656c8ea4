"""Command-line front end: ``shor-lab factor|bench|cases|selftest``."""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import bench as bench_mod
from .errors import DomainError, ValidationError
from .modexp import ExponentConvention
from .numtheory import case_catalog, catalog_json, find_case
from .pipeline import Backend, Method, ShorConfig, Status, run_shor
from .selftest import run_selftest
from .simulator import DEFAULT_MEMORY_BUDGET

EXIT_OK = 0
EXIT_NO_FACTOR = 2
EXIT_NOT_APPLICABLE = 3
EXIT_USAGE = 64
MEMORY_ENV = "SHOR_LAB_MEMORY_BUDGET"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def parse_case_range(text: str) -> list[int]:
    """'1-12', '3', '1,3,5-7' -> sorted case indices."""
    out = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = (int(x) for x in part.split("-", 1))
                if lo > hi:
                    raise ValueError
                out.update(range(lo, hi + 1))
            else:
                out.add(int(part))
    except ValueError:
        raise UsageError(f"invalid case range {text!r}")
    n_cases = len(case_catalog())
    if not out or min(out) < 1 or max(out) > n_cases:
        raise UsageError(f"case indices must lie in 1..{n_cases}: {text!r}")
    return sorted(out)


def _memory_budget(args) -> int:
    if args.memory_budget is not None:
        return args.memory_budget
    env = os.environ.get(MEMORY_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{MEMORY_ENV} must be an integer byte count, got {env!r}")
    return DEFAULT_MEMORY_BUDGET


def _short(n: int, width: int = 24) -> str:
    s = str(n)
    return s if len(s) <= width else f"{s[:10]}...{s[-10:]} ({len(s)} digits)"


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shor-lab", description="Shor's algorithm circuit simulation lab")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("factor", help="factor N with a simulated Shor circuit")
    f.add_argument("N")
    f.add_argument("--method", choices=[m.value for m in Method], default="proposed")
    f.add_argument("--k", type=_positive_int)
    f.add_argument("--shots", type=_positive_int, default=10_000)
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--backend", choices=[b.value for b in Backend], default="auto")
    f.add_argument("--convention", choices=[c.value for c in ExponentConvention], default="squaring")
    f.add_argument("--qubit-limit", type=_positive_int)
    f.add_argument("--memory-budget", type=_positive_int)
    f.add_argument("--out", type=Path)
    f.add_argument("--format", choices=["json", "csv"], default="json")

    b = sub.add_parser("bench", help="run the case catalog for both methods")
    b.add_argument("--cases", default="1-12")
    b.add_argument("--methods", default="proposed,sota")
    b.add_argument("--shots", type=_positive_int, default=10_000)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--backend", choices=[x.value for x in Backend], default="auto")
    b.add_argument("--qubit-limit", type=_positive_int, default=bench_mod.DEFAULT_QUBIT_LIMIT)
    b.add_argument("--memory-budget", type=_positive_int)
    b.add_argument("--format", choices=["markdown", "csv", "json"], default="markdown")
    b.add_argument("--out", type=Path)

    c = sub.add_parser("cases", help="list the benchmark case catalog")
    c.add_argument("--full", action="store_true", help="print N and q in full")
    c.add_argument("--format", choices=["table", "json"], default="table")

    sub.add_parser("selftest", help="run the embedded invariant checks")
    return parser


def cmd_factor(args) -> int:
    try:
        N = int(args.N)
    except ValueError:
        raise UsageError(f"N must be a decimal integer, got {args.N!r}")
    if N < 15:
        raise UsageError(f"N must be >= 15, got {N}")
    method = Method(args.method)
    k = args.k
    if k is None:
        case = find_case(N)
        if case is None:
            raise UsageError("--k is required when N is not a catalog case")
        k = case.k_proposed if method is Method.PROPOSED else case.k_sota
    cfg = ShorConfig(
        k=k,
        method=method,
        shots=args.shots,
        seed=args.seed,
        backend=args.backend,
        convention=args.convention,
        qubit_limit=args.qubit_limit,
        memory_budget=_memory_budget(args),
    )
    result = run_shor(N, cfg)

    print(f"N        {_short(N)}")
    print(f"method   {method.value}  (k={k}, {cfg.total_qubits} qubits)")
    print(f"status   {result.status.value}")
    if result.message:
        print(result.message)
    if result.status is Status.SUCCESS:
        print(f"r        {result.r_selected}")
        print(f"p        {_short(result.factors.p)}")
        print(f"q        {_short(result.factors.q)}")
    if result.gen_time_s is not None:
        print(f"gen      {result.gen_time_s:.4f} s")
    if result.exec_time_s is not None:
        print(f"exec     {result.exec_time_s:.4f} s  ({result.backend.value}, {cfg.shots} shots)")

    if args.out is not None:
        if args.format == "csv":
            if result.histogram is None:
                raise UsageError("no histogram to write: the circuit was not executed")
            text = result.histogram.to_csv()
        else:
            text = result.to_json()
        args.out.write_text(text, encoding="utf-8")

    if result.status is Status.SUCCESS:
        return EXIT_OK
    if result.status is Status.NO_FACTOR:
        return EXIT_NO_FACTOR
    return EXIT_NOT_APPLICABLE


def cmd_bench(args) -> int:
    indices = parse_case_range(args.cases)
    try:
        methods = [Method(m.strip()) for m in args.methods.split(",") if m.strip()]
    except ValueError:
        raise UsageError(f"invalid method list {args.methods!r}")
    if not methods:
        raise UsageError("no methods given")
    catalog = case_catalog()
    records = bench_mod.run_bench(
        [catalog[i - 1] for i in indices],
        methods,
        shots=args.shots,
        qubit_limit=args.qubit_limit,
        memory_budget=_memory_budget(args),
        seed=args.seed,
        backend=args.backend,
    )
    report = bench_mod.emit_report(records, args.format)
    if args.out is not None:
        args.out.write_text(report, encoding="utf-8")
    if args.out is None or args.format != "markdown":
        print(bench_mod.emit_report(records, "markdown") if args.out else report, end="")
    return EXIT_OK if bench_mod.bench_ok(records) else 1


def cmd_cases(args) -> int:
    cases = case_catalog()
    if args.format == "json":
        print(catalog_json(cases))
        return EXIT_OK
    show = str if args.full else _short
    print(f"{'case':>4} {'label':>6} {'bits(N)':>7} {'e':>5} {'k_prop':>6} {'k_sota':>6}  q / N")
    for c in cases:
        print(
            f"{c.index:>4} {c.label_bits:>6} {c.bits_of_n:>7} {c.e:>5} {c.k_proposed:>6} {c.k_sota:>6}"
            f"  q={show(c.q)} N={show(c.N)}"
        )
    return EXIT_OK


def cmd_selftest(args) -> int:
    return EXIT_OK if run_selftest() else 1


_COMMANDS = {"factor": cmd_factor, "bench": cmd_bench, "cases": cmd_cases, "selftest": cmd_selftest}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, DomainError, ValidationError) as exc:
        print(f"shor-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
