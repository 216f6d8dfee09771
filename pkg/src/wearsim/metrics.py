"""Wear statistics and report serialization.

Summary statistics are the usual evaluation quantities for leveling
studies: mean accesses per cell, the busiest cell, and how many cells
were touched at all.  The mean is reported over all cells and over
touched cells separately, since either denominator is defensible.
Lifespan extension is the ratio of a baseline's statistic to a
candidate's: a cell dies when its access count reaches the endurance
limit, so halving the peak count doubles the time to first cell death.

Report formats:

    summary-json   config echo, gc/event counts, summary statistics
    percell-csv    address,reads,writes over the full memory
    topn-csv       rank,count for the n busiest cells
    compare-csv    trace,policy,avg_all,avg_touched,max,touched,gc_count
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class CountingMode(str, Enum):
    ACCESSES = "accesses"  # reads + writes
    WRITES = "writes"      # writes only; wear in PCM-like cells is write-driven


@dataclass(frozen=True)
class SummaryStats:
    avg_all_cells: float
    avg_touched_cells: float
    max_cell: int
    max_cell_address: int
    touched_cell_count: int


@dataclass(frozen=True)
class Extension:
    avg_extension: float
    max_extension: float


class UndefinedExtensionError(ValueError):
    """Extension against a candidate whose statistic is zero."""


@dataclass
class WearReport:
    """Everything one simulation run produced, ready for export."""

    policy: str
    mem_size_cells: int
    counting_mode: CountingMode
    count_gc_traffic: bool
    gc_count: int
    event_count: int
    per_cell_reads: list[int]
    per_cell_writes: list[int]
    summary: SummaryStats


def combined_counts(reads: Sequence[int], writes: Sequence[int],
                    mode: CountingMode) -> list[int]:
    """Per-cell counts under the chosen counting mode."""
    if mode is CountingMode.WRITES:
        return list(writes)
    return [r + w for r, w in zip(reads, writes)]


def summarize(reads: Sequence[int], writes: Sequence[int],
              mode: CountingMode = CountingMode.ACCESSES) -> SummaryStats:
    """Summary statistics over per-cell counters.

    maxCellAddress breaks ties toward the lowest address so output is
    deterministic.
    """
    counts = combined_counts(reads, writes, mode)
    if not counts:
        raise ValueError("summarize requires at least one cell")
    total = sum(counts)
    touched = sum(1 for c in counts if c)
    max_cell = max(counts)
    return SummaryStats(
        avg_all_cells=total / len(counts),
        avg_touched_cells=total / touched if touched else 0.0,
        max_cell=max_cell,
        max_cell_address=counts.index(max_cell),
        touched_cell_count=touched,
    )


def top_n_distribution(reads: Sequence[int], writes: Sequence[int],
                       mode: CountingMode, n: int) -> list[int]:
    """The n largest per-cell counts, descending, zero-padded to length n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    counts = sorted(combined_counts(reads, writes, mode), reverse=True)[:n]
    counts.extend([0] * (n - len(counts)))
    return counts


def lifespan_extension(baseline: SummaryStats, candidate: SummaryStats) -> Extension:
    """How many times longer memory lasts under `candidate` than `baseline`."""
    if candidate.avg_all_cells == 0 or candidate.max_cell == 0:
        raise UndefinedExtensionError(
            "candidate has zero accesses; lifespan extension is undefined")
    return Extension(
        avg_extension=baseline.avg_all_cells / candidate.avg_all_cells,
        max_extension=baseline.max_cell / candidate.max_cell,
    )


# --- serialization ---------------------------------------------------------
#
# Integers are written exactly; floats rely on repr, which round-trips
# doubles exactly and always carries enough significant digits.

def summary_json_dict(report: WearReport) -> dict:
    return {
        "policy": report.policy,
        "mem_size_cells": report.mem_size_cells,
        "counting_mode": report.counting_mode.value,
        "count_gc_traffic": report.count_gc_traffic,
        "gc_count": report.gc_count,
        "event_count": report.event_count,
        "summary": {
            "avg_all_cells": report.summary.avg_all_cells,
            "avg_touched_cells": report.summary.avg_touched_cells,
            "max_cell": report.summary.max_cell,
            "max_cell_address": report.summary.max_cell_address,
            "touched_cell_count": report.summary.touched_cell_count,
        },
    }


def write_summary_json(report: WearReport, sink) -> None:
    json.dump(summary_json_dict(report), sink, indent=2)
    sink.write("\n")


def load_summary(source) -> tuple[dict, SummaryStats]:
    """Read back a summary-json document; returns (full dict, stats)."""
    data = json.load(source) if hasattr(source, "read") else json.loads(source)
    s = data["summary"]
    stats = SummaryStats(
        avg_all_cells=float(s["avg_all_cells"]),
        avg_touched_cells=float(s["avg_touched_cells"]),
        max_cell=int(s["max_cell"]),
        max_cell_address=int(s["max_cell_address"]),
        touched_cell_count=int(s["touched_cell_count"]),
    )
    return data, stats


def write_percell_csv(report: WearReport, sink) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["address", "reads", "writes"])
    for address, (r, w) in enumerate(zip(report.per_cell_reads,
                                         report.per_cell_writes)):
        writer.writerow([address, r, w])


def load_percell_csv(source) -> tuple[list[int], list[int]]:
    """Read back a percell-csv document; returns (reads, writes)."""
    rows = list(csv.reader(source))
    if not rows or rows[0] != ["address", "reads", "writes"]:
        raise ValueError("not a percell-csv file: bad or missing header")
    reads: list[int] = []
    writes: list[int] = []
    for i, row in enumerate(rows[1:]):
        if len(row) != 3 or int(row[0]) != i:
            raise ValueError(f"percell-csv row {i + 1} malformed")
        reads.append(int(row[1]))
        writes.append(int(row[2]))
    return reads, writes


def write_topn_csv(counts: Sequence[int], sink) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(["rank", "count"])
    for rank, count in enumerate(counts, start=1):
        writer.writerow([rank, count])


COMPARE_CSV_HEADER = ("trace", "policy", "avg_all", "avg_touched",
                      "max", "touched", "gc_count")


def compare_csv_row(trace_name: str, report: WearReport) -> tuple:
    s = report.summary
    return (trace_name, report.policy, repr(s.avg_all_cells),
            repr(s.avg_touched_cells), s.max_cell, s.touched_cell_count,
            report.gc_count)


def write_compare_csv(rows: Iterable[tuple], sink) -> None:
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(COMPARE_CSV_HEADER)
    writer.writerows(rows)


def export_report(report: WearReport, fmt: str, sink, *,
                  top_n: int = 1000, trace_name: str = "-") -> None:
    """Emit one report in any of the supported formats."""
    if fmt == "summary-json":
        write_summary_json(report, sink)
    elif fmt == "percell-csv":
        write_percell_csv(report, sink)
    elif fmt == "topn-csv":
        counts = top_n_distribution(report.per_cell_reads, report.per_cell_writes,
                                    report.counting_mode, top_n)
        write_topn_csv(counts, sink)
    elif fmt == "compare-csv":
        write_compare_csv([compare_csv_row(trace_name, report)], sink)
    else:
        raise ValueError(f"unknown report format '{fmt}'")
