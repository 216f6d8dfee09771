"""Trace replay against wear-counted memory with compacting collection.

Dual-ring policies: the work ring serves bump allocation and all reads
and writes; a collection copies every live object, in ascending order
of its current base cell, to consecutive ring addresses on the idle
ring starting at the policy's next start location, then swaps the ring
roles.  Freed objects simply stop being copied; their cells are not
reused between collections.

The single-space baseline keeps one flat space of the full memory size
and slides live objects down toward address 0 instead.

Wear accounting: application reads and writes touch exactly the cells
they name.  When GC traffic is counted, every relocated cell costs one
read at its source and one write at its destination; an object the
single-space compactor leaves in place costs nothing.  Allocation,
freeing, and the post-collection clean of the old work ring touch no
cells at all.
"""

from __future__ import annotations

from dataclasses import dataclass

from wearsim.memory import (AccessKind, DualRingMemory, SingleSpaceMemory,
                            translate)
from wearsim.metrics import CountingMode, WearReport, summarize
from wearsim.policy import Policy, PolicyState
from wearsim.trace import Alloc, Free, Gc, Read, Trace, TraceEvent, Write


class SimulationError(Exception):
    """A trace event that cannot be applied to the engine state."""


class ObjectTooLargeError(SimulationError):
    """Requested object exceeds what one ring (or the single space) can hold."""


class OutOfMemoryError(SimulationError):
    """Allocation still does not fit after collection."""


class InvalidFreeError(SimulationError):
    """Free of an object that is not live."""


class UseAfterFreeError(SimulationError):
    """Read or write of an object that is not live."""


class OutOfBoundsError(SimulationError):
    """Access past the end of an object."""


@dataclass
class ObjectRecord:
    object_id: int
    size_cells: int
    ring: int
    base_cell: int
    live: bool = True


@dataclass(frozen=True)
class EngineConfig:
    mem_size_cells: int
    policy: Policy
    count_gc_traffic: bool = True
    auto_gc_on_alloc_failure: bool = True

    def __post_init__(self):
        if self.mem_size_cells < 4 or self.mem_size_cells % 2:
            raise ValueError(
                f"mem_size_cells must be even and >= 4, got {self.mem_size_cells}")


class Engine:
    """Replays one trace; confine each instance to a single run."""

    def __init__(self, config: EngineConfig):
        self.config = config
        self.single = not config.policy.is_dual_ring
        if self.single:
            self.capacity = config.mem_size_cells
            self.memory = SingleSpaceMemory(self.capacity)
            self.policy_state = None
        else:
            self.capacity = config.mem_size_cells // 2
            self.memory = DualRingMemory(self.capacity)
            self.policy_state = PolicyState(config.policy)
        self.objects: dict[int, ObjectRecord] = {}
        self.live_start = 0   # base of the compacted block from the last GC
        self.live_len = 0     # its length, in cells
        self.alloc_cursor = 0
        self.free_cells = self.capacity
        self.gc_count = 0
        self.event_count = 0

    @property
    def work_ring(self) -> int:
        return 0 if self.single else self.memory.work_ring

    def handle_alloc(self, object_id: int, size_cells: int) -> None:
        record = self.objects.get(object_id)
        if record is not None and record.live:
            raise SimulationError(f"alloc of live object {object_id}")
        if size_cells > self.capacity:
            raise ObjectTooLargeError(
                f"object {object_id} of {size_cells} cells exceeds capacity "
                f"{self.capacity}")
        if size_cells > self.free_cells:
            if self.config.auto_gc_on_alloc_failure:
                self.handle_gc()
            if size_cells > self.free_cells:
                raise OutOfMemoryError(
                    f"cannot allocate {size_cells} cells for object {object_id}: "
                    f"{self.live_len} cells live, {self.free_cells} free")
        self.objects[object_id] = ObjectRecord(
            object_id, size_cells, self.work_ring, self.alloc_cursor)
        self.alloc_cursor = (self.alloc_cursor + size_cells) % self.capacity
        self.free_cells -= size_cells

    def handle_free(self, object_id: int) -> None:
        record = self.objects.get(object_id)
        if record is None or not record.live:
            raise InvalidFreeError(f"free of dead object {object_id}")
        record.live = False  # cells reclaimed at the next collection

    def handle_access(self, object_id: int, offset: int, length: int,
                      kind: AccessKind) -> None:
        record = self.objects.get(object_id)
        if record is None or not record.live:
            raise UseAfterFreeError(f"{kind.value} of dead object {object_id}")
        if offset + length > record.size_cells:
            raise OutOfBoundsError(
                f"{kind.value} of {length} cells at offset {offset} exceeds size "
                f"{record.size_cells} of object {object_id}")
        base = translate(record.base_cell, offset, self.capacity)
        if self.single:
            self.memory.record_range(base, length, kind)
        else:
            self.memory.record_range(record.ring, base, length, kind)

    def handle_gc(self) -> None:
        live = sorted((r for r in self.objects.values() if r.live),
                      key=lambda r: r.base_cell)
        count_traffic = self.config.count_gc_traffic
        if self.single:
            dest = 0
            for record in live:
                if record.base_cell != dest:
                    if count_traffic:
                        self.memory.record_range(
                            record.base_cell, record.size_cells, AccessKind.READ)
                        self.memory.record_range(
                            dest, record.size_cells, AccessKind.WRITE)
                    record.base_cell = dest
                dest += record.size_cells
            start = 0
        else:
            idle = self.memory.idle_ring
            start = self.policy_state.take(idle, self.capacity)
            dest = start
            for record in live:
                if count_traffic:
                    self.memory.record_range(
                        record.ring, record.base_cell, record.size_cells,
                        AccessKind.READ)
                    self.memory.record_range(
                        idle, dest, record.size_cells, AccessKind.WRITE)
                record.ring = idle
                record.base_cell = dest
                dest = (dest + record.size_cells) % self.capacity
            self.memory.swap_roles()
        # "clean" the old work space: metadata only, no cell traffic
        self.objects = {r.object_id: r for r in live}
        self.live_start = start
        self.live_len = sum(r.size_cells for r in live)
        self.alloc_cursor = (start + self.live_len) % self.capacity
        self.free_cells = self.capacity - self.live_len
        self.gc_count += 1

    def process(self, event: TraceEvent) -> None:
        if isinstance(event, Alloc):
            self.handle_alloc(event.object_id, event.size_cells)
        elif isinstance(event, Free):
            self.handle_free(event.object_id)
        elif isinstance(event, Read):
            self.handle_access(event.object_id, event.offset_cells,
                               event.len_cells, AccessKind.READ)
        elif isinstance(event, Write):
            self.handle_access(event.object_id, event.offset_cells,
                               event.len_cells, AccessKind.WRITE)
        elif isinstance(event, Gc):
            self.handle_gc()
        else:
            raise SimulationError(f"unknown event {event!r}")
        self.event_count += 1

    def build_report(self, mode: CountingMode = CountingMode.ACCESSES) -> WearReport:
        reads = self.memory.per_cell_reads()
        writes = self.memory.per_cell_writes()
        return WearReport(
            policy=self.config.policy.spec_string(),
            mem_size_cells=self.config.mem_size_cells,
            counting_mode=mode,
            count_gc_traffic=self.config.count_gc_traffic,
            gc_count=self.gc_count,
            event_count=self.event_count,
            per_cell_reads=reads,
            per_cell_writes=writes,
            summary=summarize(reads, writes, mode),
        )


def replay(trace: Trace, config: EngineConfig,
           mode: CountingMode = CountingMode.ACCESSES) -> WearReport:
    """Replay a full trace and return its wear report.

    Deterministic: the same trace and config always produce an
    identical report.  Simulation errors are re-raised with the index
    of the event that caused them.
    """
    engine = Engine(config)
    for index, event in enumerate(trace.events):
        try:
            engine.process(event)
        except SimulationError as err:
            raise type(err)(f"event {index}: {err}") from err
    return engine.build_report(mode)
