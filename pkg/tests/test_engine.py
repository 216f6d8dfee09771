import pytest

from invariants import assert_disjoint_live, assert_post_gc_invariants
from wearsim.engine import (Engine, EngineConfig, InvalidFreeError,
                            ObjectTooLargeError, OutOfBoundsError,
                            OutOfMemoryError, SimulationError,
                            UseAfterFreeError, replay)
from wearsim.metrics import CountingMode
from wearsim.policy import Policy, parse_policy
from wearsim.trace import Alloc, Free, Gc, Read, Trace, Write
from wearsim.workload import WorkloadSpec, generate


def engine_for(mem=20, policy="golden", **kwargs):
    return Engine(EngineConfig(mem, parse_policy(policy), **kwargs))


class TestConfig:
    def test_odd_memory_rejected(self):
        with pytest.raises(ValueError):
            EngineConfig(21, Policy("golden"))

    def test_too_small_memory_rejected(self):
        with pytest.raises(ValueError):
            EngineConfig(2, Policy("golden"))

    def test_ring_is_half_of_memory(self):
        assert engine_for(20).capacity == 10
        assert engine_for(20, "single").capacity == 20


class TestAlloc:
    def test_first_allocation_at_head(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 3)
        assert engine.objects[1].base_cell == 0
        assert engine.alloc_cursor == 3
        assert engine.memory.total() == 0  # allocation touches no cells

    def test_object_larger_than_ring(self):
        with pytest.raises(ObjectTooLargeError):
            engine_for(20).handle_alloc(1, 11)

    def test_out_of_memory_after_gc(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 8)
        with pytest.raises(OutOfMemoryError, match="8 cells live"):
            engine.handle_alloc(2, 5)
        assert engine.gc_count == 1  # one collection was attempted first

    def test_gc_makes_room_for_retry(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 6)
        engine.handle_free(1)
        engine.handle_alloc(2, 6)  # only fits once the dead cells are reclaimed
        assert engine.gc_count == 1
        assert engine.objects[2].live

    def test_no_auto_gc_when_disabled(self):
        engine = engine_for(20, auto_gc_on_alloc_failure=False)
        engine.handle_alloc(1, 6)
        engine.handle_free(1)
        with pytest.raises(OutOfMemoryError):
            engine.handle_alloc(2, 6)
        assert engine.gc_count == 0

    def test_alloc_of_live_object_rejected(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 2)
        with pytest.raises(SimulationError):
            engine.handle_alloc(1, 2)

    def test_id_reuse_after_free(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 2)
        engine.handle_free(1)
        engine.handle_alloc(1, 3)
        assert engine.objects[1].size_cells == 3


class TestFree:
    def test_metadata_only(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 3)
        engine.handle_free(1)
        assert not engine.objects[1].live
        assert engine.memory.total() == 0

    def test_free_of_unknown_object(self):
        with pytest.raises(InvalidFreeError):
            engine_for(20).handle_free(99)

    def test_double_free(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 3)
        engine.handle_free(1)
        with pytest.raises(InvalidFreeError):
            engine.handle_free(1)

    def test_dead_objects_are_not_copied(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 3)
        engine.handle_free(1)
        engine.handle_gc()
        assert engine.memory.total() == 0
        assert engine.gc_count == 1
        assert engine.work_ring == 1  # roles still swap on an empty collection


class TestAccess:
    def test_write_wraps_around_ring_seam(self):
        # fraction:0.8 on a 10-cell ring shifts by 8, so the ring's second
        # use as destination starts at cell 8 and a 5-cell object wraps.
        engine = engine_for(20, "fraction:0.8")
        engine.handle_alloc(1, 5)
        engine.handle_gc()  # to ring 1 at 0
        engine.handle_gc()  # to ring 0 at 0
        engine.handle_gc()  # to ring 1 at 8
        record = engine.objects[1]
        assert (record.ring, record.base_cell) == (1, 8)
        before = list(engine.memory.rings[1].writes)
        engine.process(Write(1, 0, 5))
        after = engine.memory.rings[1].writes
        touched = {c for c in range(10) if after[c] != before[c]}
        assert touched == {8, 9, 0, 1, 2}

    def test_read_does_not_touch_write_counters(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 4)
        engine.process(Read(1, 0, 4))
        assert sum(engine.memory.per_cell_writes()) == 0
        assert sum(engine.memory.per_cell_reads()) == 4

    def test_use_after_free(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 2)
        engine.handle_free(1)
        with pytest.raises(UseAfterFreeError):
            engine.process(Write(1, 0, 1))

    def test_out_of_bounds(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 3)
        with pytest.raises(OutOfBoundsError):
            engine.process(Read(1, 2, 2))


class TestGc:
    def test_first_collection_copies_to_idle_head(self):
        engine = engine_for(20)
        engine.handle_alloc(0, 4)
        engine.handle_alloc(1, 3)  # lands at base 4
        engine.handle_free(0)
        engine.handle_gc()
        record = engine.objects[1]
        assert (record.ring, record.base_cell) == (1, 0)
        assert engine.memory.rings[0].reads == [0, 0, 0, 0, 1, 1, 1, 0, 0, 0]
        assert engine.memory.rings[1].writes == [1, 1, 1, 0, 0, 0, 0, 0, 0, 0]
        assert engine.work_ring == 1
        assert_post_gc_invariants(engine)

    def test_copy_preserves_base_order(self):
        engine = engine_for(20)
        engine.handle_alloc(1, 2)
        engine.handle_alloc(2, 3)
        engine.handle_gc()
        engine.handle_free(1)
        engine.handle_alloc(3, 1)
        engine.handle_gc()
        # survivors at bases 2 (object 2) and 5 (object 3) compact in order
        assert engine.objects[2].base_cell == 0
        assert engine.objects[3].base_cell == 3
        assert_post_gc_invariants(engine)

    def test_empty_collection(self):
        engine = engine_for(20)
        engine.handle_gc()
        assert engine.gc_count == 1
        assert engine.live_len == 0
        assert engine.memory.total() == 0
        assert engine.work_ring == 1

    def test_second_use_of_a_ring_starts_at_shift(self):
        engine = engine_for(720)  # ring of 360, golden shift 137
        engine.handle_alloc(1, 3)
        engine.handle_gc()
        engine.handle_gc()
        engine.handle_gc()  # ring 1 again, two collections later
        assert engine.objects[1].base_cell == 137

    def test_no_gc_traffic_mode(self):
        trace = Trace([Alloc(1, 3), Write(1, 0, 3), Gc(), Write(1, 0, 3)])
        config = EngineConfig(20, Policy("golden"), count_gc_traffic=False)
        report = replay(trace, config)
        assert sum(report.per_cell_writes) == 6
        assert sum(report.per_cell_reads) == 0


class TestSingleSpace:
    def test_unmoved_object_records_nothing(self):
        engine = engine_for(20, "single")
        engine.handle_alloc(1, 3)
        engine.handle_gc()  # already at 0: no traffic
        assert engine.memory.total() == 0
        assert engine.objects[1].base_cell == 0

    def test_sliding_object_records_copy(self):
        engine = engine_for(20, "single")
        engine.handle_alloc(1, 3)
        engine.handle_alloc(2, 2)
        engine.handle_free(1)
        engine.handle_gc()
        assert engine.objects[2].base_cell == 0
        assert engine.memory.per_cell_reads()[3:5] == [1, 1]
        assert engine.memory.per_cell_writes()[0:2] == [1, 1]
        assert engine.memory.total() == 4

    def test_uses_whole_memory_as_one_space(self):
        engine = engine_for(8, "single")
        engine.handle_alloc(1, 6)  # larger than half; fine without rings
        assert engine.objects[1].base_cell == 0
        with pytest.raises(ObjectTooLargeError):
            engine.handle_alloc(2, 9)


class TestReplay:
    def test_empty_trace(self):
        report = replay(Trace([]), EngineConfig(20, Policy("golden")))
        assert sum(report.per_cell_reads) == sum(report.per_cell_writes) == 0
        assert report.gc_count == 0
        assert report.event_count == 0

    def test_hand_checked_totals(self):
        trace = Trace([Alloc(1, 3), Write(1, 0, 3), Gc(), Write(1, 0, 3)])
        report = replay(trace, EngineConfig(20, Policy("golden")))
        assert sum(report.per_cell_writes) == 9  # 3 app + 3 GC copy + 3 app
        assert sum(report.per_cell_reads) == 3   # GC copy source
        assert report.gc_count == 1

    def test_deterministic(self):
        trace = generate(WorkloadSpec("churn", 10, 500, 3, seed=5))
        config = EngineConfig(256, Policy("random", seed=42))
        assert replay(trace, config) == replay(trace, config)

    def test_errors_name_the_event_index(self):
        trace = Trace([Alloc(1, 2), Free(1), Write(1, 0, 1)])
        with pytest.raises(UseAfterFreeError, match="event 2:"):
            replay(trace, EngineConfig(20, Policy("golden")))

    def test_live_set_is_policy_independent(self):
        trace = generate(WorkloadSpec("churn", 8, 600, 3, gc_every=37, seed=9))
        mem = trace.header.suggested_mem_size_cells
        engines = [Engine(EngineConfig(mem, parse_policy(p)))
                   for p in ("golden", "none", "random:1", "single")]
        for event in trace.events:
            live_sets = []
            for engine in engines:
                engine.process(event)
                live_sets.append(sorted((r.object_id, r.size_cells)
                                        for r in engine.objects.values() if r.live))
            assert all(s == live_sets[0] for s in live_sets)

    def test_live_objects_stay_disjoint(self):
        trace = generate(WorkloadSpec("churn", 8, 400, 3, gc_every=23, seed=3))
        engine = Engine(EngineConfig(trace.header.suggested_mem_size_cells,
                                     Policy("golden")))
        for event in trace.events:
            engine.process(event)
            assert_disjoint_live(engine)
