import random

import pytest

from magicmap.aig import from_raw
from magicmap.benchgen import BENCHMARKS
from magicmap.lut_mapper import Lut, LutNetlist, SopCover, luts_from_raw
from magicmap.pipeline import FlowConfig, map_to_crossbar, synthesize
from magicmap.placer import place_supergates
from magicmap.scheduler import (INIT, NOR_COL, NOR_ROW, NOT_COPY, MicroOp, Schedule, ScheduleError,
                                check_legality, compatible, count_stats, emit_trace,
                                lifetimes, parse_trace, program)


def _flow(net, mode="hipe", **kw):
    return map_to_crossbar(net, FlowConfig(mode=mode, grid=(64, 64), **kw))


@pytest.mark.parametrize("mode", ["hipe", "said-baseline"])
def test_single_term_supergate_takes_three_cycles(mode):
    nor = Lut((0, 1), SopCover(2, ((0, 0b11),)))     # ~a.~b reads a and b directly
    net = LutNetlist(2, (nor,), ((2, False),), 2)
    non, pl, sched = _flow(net, mode)
    assert [c[0].kind for c in sched.cycles] == [NOR_ROW, NOR_COL, NOR_COL]
    assert count_stats(sched, pl).cycles == 3
    assert check_legality(sched, pl) == []


def test_wire_only_netlist_costs_copies_only():
    plain = LutNetlist(2, (), ((0, False), (1, False)), 2)
    non, pl, sched = _flow(plain)
    assert (len(sched), pl.mems()) == (0, 2)
    inverted = LutNetlist(2, (), ((0, True), (1, False)), 2)
    non, pl, sched = _flow(inverted)
    assert len(sched) == 1 and sched.cycles[0][0].kind == NOT_COPY
    assert pl.mems() == 3


def test_program_requires_routing():
    non, pl, _ = _flow(luts_from_raw(BENCHMARKS["c17"]()))
    with pytest.raises(ScheduleError):
        program(place_supergates(non, (64, 64)))


def test_compatible_rules():
    a = MicroOp(NOR_ROW, ((0, 0), (0, 1)), (0, 2))
    b = MicroOp(NOR_ROW, ((1, 0),), (1, 2))
    assert compatible([a, b]) is None
    assert "mixed" in compatible([a, MicroOp(NOR_COL, ((0, 5), (1, 5)), (2, 5))])
    assert compatible([a, MicroOp(NOR_ROW, ((0, 2),), (0, 3))]) is not None       # reuses (0, 2)
    assert compatible([a, MicroOp(NOR_ROW, ((1, 2),), (1, 4))]) is not None       # input line = output line
    c1 = MicroOp(NOT_COPY, ((0, 0),), (0, 4))
    c2 = MicroOp(NOT_COPY, ((1, 0),), (1, 4))
    assert compatible([c1, c2]) is None
    assert compatible([c1, MicroOp(NOT_COPY, ((1, 1),), (1, 4))]) == "copies not aligned"
    assert compatible([c1, a]) == "logic and copy ops mixed"
    assert compatible([MicroOp(NOT_COPY, ((0, 0),), (1, 1))]) is not None


def _compiled():
    for name in ("c17", "full_adder", "adder4", "cmp4"):
        aig = from_raw(BENCHMARKS[name]())
        for k in (2, 3, 7):
            for mode in ("hipe", "said-baseline"):
                yield map_to_crossbar(synthesize(aig, k), FlowConfig(mode=mode, grid=(256, 256)))


def test_schedules_are_legal_and_complete():
    for non, pl, sched in _compiled():
        assert check_legality(sched, pl) == []
        assert len(list(sched.ops())) == len(program(pl))
        kinds = [{op.kind in (NOR_ROW, NOR_COL) for op in cyc} for cyc in sched.cycles]
        assert all(len(k) == 1 for k in kinds)
        assert sched.op_count() == len(pl.copies) + non.op_count()


def test_legality_catches_mutations():
    non, pl, sched = next(_compiled())
    rng = random.Random(2)
    cycles = [list(c) for c in sched.cycles]
    # reorder two dependent cycles
    bad = Schedule(cycles[::-1])
    assert any("before it is written" in e for e in check_legality(bad, pl))
    # drop the op that writes an output cell
    po = pl.po_cells[0]
    dropped = Schedule([[op for op in c if op.output != po] for c in cycles])
    dropped.cycles = [c for c in dropped.cycles if c]
    assert any("never written" in e for e in check_legality(dropped, pl))
    # move an output off the grid
    i = rng.randrange(len(cycles))
    op = cycles[i][0]
    moved = [list(c) for c in cycles]
    moved[i][0] = MicroOp(op.kind, op.inputs, (op.output[0], pl.grid_cols + 3))
    assert check_legality(Schedule(moved), pl)
    # write the same cell twice
    doubled = [list(c) for c in cycles] + [[cycles[-1][0]]]
    assert any("written twice" in e for e in check_legality(Schedule(doubled), pl))


def test_charge_init_doubles_length():
    net = luts_from_raw(BENCHMARKS["full_adder"]())
    _, pl, plain = _flow(net)
    _, pl2, charged = _flow(net, charge_init=True)
    assert len(charged) == 2 * len(plain)
    assert charged.op_count() == plain.op_count()
    for init, cyc in zip(charged.cycles[::2], charged.cycles[1::2]):
        assert init[0].kind == INIT
        assert set(init[0].outputs) == {op.output for op in cyc}
    assert check_legality(charged, pl2) == []


def test_trace_roundtrip():
    for non, pl, sched in _compiled():
        text = emit_trace(sched, pl)
        tr = parse_trace(text)
        assert tr.grid == (pl.grid_rows, pl.grid_cols)
        assert tr.loads == pl.loads and tr.po_cells == pl.po_cells
        assert [[(o.kind, o.inputs, o.output) for o in c] for c in tr.schedule.cycles] == \
               [[(o.kind, o.inputs, o.output) for o in c] for c in sched.cycles]
        assert emit_trace(tr.schedule, pl) == text


def test_lifetimes_cover_every_cell():
    non, pl, sched = next(_compiled())
    life = lifetimes(sched, pl)
    assert set(life) >= set(pl.loads)
    for c in pl.po_cells:
        assert life[c][1] == len(sched)
    assert all(b <= d for b, d in life.values())
