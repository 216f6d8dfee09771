"""Command-line front end: gen, run, compare, and report subcommands.

Exit codes: 0 success, 2 usage error, 3 unreadable or invalid trace /
malformed report input, 4 simulation error (e.g. out of memory).
"""

from __future__ import annotations

import argparse
import os
import sys

from wearsim.engine import EngineConfig, SimulationError, replay
from wearsim.metrics import (CountingMode, UndefinedExtensionError,
                             compare_csv_row, lifespan_extension,
                             load_percell_csv, load_summary,
                             top_n_distribution, write_compare_csv,
                             write_percell_csv, write_summary_json,
                             write_topn_csv)
from wearsim.policy import PolicyError, parse_policy
from wearsim.trace import TraceParseError, parse_trace, validate_trace, write_trace
from wearsim.workload import PATTERNS, WorkloadSpec, generate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BAD_TRACE = 3
EXIT_SIMULATION = 4


def _fail(message: str) -> None:
    print(f"wearsim: error: {message}", file=sys.stderr)


def _open_out(path: str | None):
    """Text sink for reports: the given path, or stdout when absent."""
    if path is None:
        return sys.stdout
    return open(path, "w", newline="")


def _write_out(path: str | None, emit) -> None:
    sink = _open_out(path)
    try:
        emit(sink)
    finally:
        if sink is not sys.stdout:
            sink.close()


def _load_valid_trace(path: str):
    """Parse and validate a trace file, or return None after diagnostics."""
    try:
        with open(path, "rb") as f:
            trace = parse_trace(f)
    except OSError as err:
        _fail(f"cannot read trace: {err}")
        return None
    except TraceParseError as err:
        _fail(f"{path}: {err}")
        return None
    violations = validate_trace(trace)
    if violations:
        for v in violations[:5]:
            _fail(f"{path}: event {v.event_index}: {v.message}")
        if len(violations) > 5:
            _fail(f"{path}: {len(violations) - 5} further violations")
        return None
    return trace


def _resolve_mem_size(args, trace) -> int | None:
    mem = args.mem_size
    if mem is None:
        mem = trace.header.suggested_mem_size_cells
    if mem is None:
        _fail("no --mem-size given and trace has no #mem header")
        return None
    if mem < 4 or mem % 2:
        _fail(f"memory size must be even and >= 4 cells, got {mem}")
        return None
    return mem


def _cmd_run(args) -> int:
    trace = _load_valid_trace(args.trace)
    if trace is None:
        return EXIT_BAD_TRACE
    mem = _resolve_mem_size(args, trace)
    if mem is None:
        return EXIT_USAGE
    try:
        policy = parse_policy(args.policy)
    except PolicyError as err:
        _fail(str(err))
        return EXIT_USAGE
    config = EngineConfig(mem, policy, count_gc_traffic=not args.no_gc_traffic)
    try:
        report = replay(trace, config, CountingMode(args.count))
    except SimulationError as err:
        _fail(str(err))
        return EXIT_SIMULATION
    _write_out(args.out, lambda sink: write_summary_json(report, sink))
    if args.percell:
        _write_out(args.percell, lambda sink: write_percell_csv(report, sink))
    if args.topn is not None:
        counts = top_n_distribution(report.per_cell_reads, report.per_cell_writes,
                                    report.counting_mode, args.topn)
        _write_out(args.topn_out, lambda sink: write_topn_csv(counts, sink))
    return EXIT_OK


def _cmd_compare(args) -> int:
    policy_specs = [p.strip() for p in args.policies.split(",") if p.strip()]
    if len(policy_specs) < 2:
        _fail("--policies needs at least two comma-separated policies")
        return EXIT_USAGE
    try:
        policies = [parse_policy(spec) for spec in policy_specs]
    except PolicyError as err:
        _fail(str(err))
        return EXIT_USAGE
    trace = _load_valid_trace(args.trace)
    if trace is None:
        return EXIT_BAD_TRACE
    mem = _resolve_mem_size(args, trace)
    if mem is None:
        return EXIT_USAGE
    mode = CountingMode(args.count)
    reports = []
    for policy in policies:  # one isolated engine per policy, flag order
        config = EngineConfig(mem, policy, count_gc_traffic=not args.no_gc_traffic)
        try:
            reports.append(replay(trace, config, mode))
        except SimulationError as err:
            _fail(f"policy {policy.spec_string()}: {err}")
            return EXIT_SIMULATION
    trace_name = os.path.basename(args.trace)
    rows = [compare_csv_row(trace_name, report) for report in reports]
    _write_out(args.out, lambda sink: write_compare_csv(rows, sink))
    baseline = reports[0].summary
    try:
        extensions = [lifespan_extension(baseline, r.summary) for r in reports]
    except UndefinedExtensionError as err:
        _fail(str(err))
        return EXIT_SIMULATION

    def emit_extensions(sink):
        sink.write("policy,avg_extension,max_extension\n")
        for report, ext in zip(reports, extensions):
            sink.write(f"{report.policy},{ext.avg_extension!r},"
                       f"{ext.max_extension!r}\n")

    _write_out(args.extensions_out, emit_extensions)
    return EXIT_OK


def _cmd_gen(args) -> int:
    spec = WorkloadSpec(
        pattern=args.pattern,
        object_count=args.objects,
        op_count=args.ops,
        mean_object_size=args.mean_size,
        hot_fraction=args.hot_fraction,
        gc_every=args.gc_every,
        seed=args.seed,
    )
    try:
        trace = generate(spec)
    except ValueError as err:
        _fail(str(err))
        return EXIT_USAGE
    try:
        with open(args.out, "wb") as f:
            write_trace(trace, f)
    except OSError as err:
        _fail(f"cannot write trace: {err}")
        return EXIT_USAGE
    print(f"wrote {len(trace.events)} events to {args.out}")
    return EXIT_OK


def _cmd_report(args) -> int:
    mode = CountingMode(args.count)
    summaries: list[tuple[str, object]] = []
    for path in args.inputs:
        stem = os.path.splitext(os.path.basename(path))[0]
        try:
            if path.endswith(".json"):
                with open(path) as f:
                    _, stats = load_summary(f)
                summaries.append((stem, stats))
            elif path.endswith(".csv"):
                with open(path, newline="") as f:
                    reads, writes = load_percell_csv(f)
                counts = top_n_distribution(reads, writes, mode, args.topn)
                out_dir = args.out_dir or os.path.dirname(path) or "."
                out_path = os.path.join(out_dir, f"{stem}_top{args.topn}.csv")
                with open(out_path, "w", newline="") as f:
                    write_topn_csv(counts, f)
            else:
                _fail(f"{path}: expected a .json summary or .csv percell file")
                return EXIT_BAD_TRACE
        except (OSError, ValueError, KeyError) as err:
            _fail(f"{path}: {err}")
            return EXIT_BAD_TRACE

    def emit_table(sink):
        sink.write("baseline,candidate,avg_extension,max_extension\n")
        for base_name, base_stats in summaries:
            for cand_name, cand_stats in summaries:
                if cand_name is base_name:
                    continue
                try:
                    ext = lifespan_extension(base_stats, cand_stats)
                except UndefinedExtensionError:
                    print(f"wearsim: skipping {base_name} vs {cand_name}: "
                          "zero candidate statistic", file=sys.stderr)
                    continue
                sink.write(f"{base_name},{cand_name},{ext.avg_extension!r},"
                           f"{ext.max_extension!r}\n")

    _write_out(args.out, emit_table)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wearsim",
        description="Trace-driven simulator of dual-ring golden-ratio memory "
                    "wear leveling integrated with semispace GC.",
        epilog="Exit codes: 0 success, 2 usage error, 3 invalid trace or "
               "report input, 4 simulation error.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_replay_flags(p):
        p.add_argument("--trace", required=True, help="trace file to replay")
        p.add_argument("--mem-size", type=int, default=None,
                       help="total memory in cells (even, >= 4); defaults to "
                            "the trace's #mem header")
        p.add_argument("--count", choices=["accesses", "writes"],
                       default="accesses", help="what the summary counts")
        p.add_argument("--no-gc-traffic", action="store_true",
                       help="do not count GC copy traffic as cell accesses")

    run = sub.add_parser("run", help="replay one trace under one policy")
    add_replay_flags(run)
    run.add_argument("--policy", required=True,
                     help="golden | quarter | fraction:<f> | none | "
                          "random:<seed> | single")
    run.add_argument("--out", help="summary-json path (default: stdout)")
    run.add_argument("--percell", help="write percell-csv here")
    run.add_argument("--topn", type=int, help="also compute the N busiest cells")
    run.add_argument("--topn-out", help="topn-csv path (default: stdout)")
    run.set_defaults(func=_cmd_run)

    compare = sub.add_parser(
        "compare", help="replay one trace under several policies")
    add_replay_flags(compare)
    compare.add_argument("--policies", required=True,
                         help="comma-separated policy list; first is the "
                              "baseline for extension ratios")
    compare.add_argument("--out", help="compare-csv path (default: stdout)")
    compare.add_argument("--extensions-out",
                         help="extension-ratio csv path (default: stdout)")
    compare.set_defaults(func=_cmd_compare)

    gen = sub.add_parser("gen", help="generate a synthetic trace")
    gen.add_argument("--pattern", required=True, choices=PATTERNS)
    gen.add_argument("--objects", type=int, default=100,
                     help="object population (default 100)")
    gen.add_argument("--ops", type=int, default=10000,
                     help="number of alloc/free/read/write events (default 10000)")
    gen.add_argument("--mean-size", type=int, default=8,
                     help="mean object size in cells (default 8)")
    gen.add_argument("--hot-fraction", type=float, default=0.1,
                     help="hot share of the population, hotspot only (default 0.1)")
    gen.add_argument("--gc-every", type=int, default=100,
                     help="insert a G event every N ops (default 100)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="trace file to write")
    gen.set_defaults(func=_cmd_gen)

    report = sub.add_parser(
        "report", help="post-process run outputs: top-N tables and extensions")
    report.add_argument("inputs", nargs="+",
                        help=".json summaries and/or .csv percell files")
    report.add_argument("--topn", type=int, default=1000,
                        help="ranks per percell input (default 1000)")
    report.add_argument("--count", choices=["accesses", "writes"],
                        default="accesses")
    report.add_argument("--out", help="extension table path (default: stdout)")
    report.add_argument("--out-dir",
                        help="directory for topn-csv files (default: next to "
                             "each input)")
    report.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
