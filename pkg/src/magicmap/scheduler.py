"""Cycle-by-cycle MAGIC micro-op programs.

Logic ops (row NORs, column NORs) and copy ops never share a cycle. Inside a
logic cycle all ops have one orientation, touch disjoint cells, have disjoint
spans when they sit on the same line, and no line is both an input line and
an output line of the cycle. Copy cycles follow the strict rule: one
orientation, every op copies between the same pair of lines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .placer import Cell, Placement
from .supergate import NonNetlist

INIT, NOR_ROW, NOR_COL, NOT_COPY = "INIT", "NOR_ROW", "NOR_COL", "NOT_COPY"
KINDS = (INIT, NOR_ROW, NOR_COL, NOT_COPY)


class ScheduleError(ValueError):
    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


@dataclass(frozen=True)
class MicroOp:
    kind: str
    inputs: Tuple[Cell, ...]
    output: Cell
    outputs: Tuple[Cell, ...] = ()   # INIT only
    tag: Tuple = field(default=(), compare=False, repr=False)   # scheduling class hint

    def orientation(self) -> str:
        """'row' when every cell shares a row, 'col' when they share a column."""
        cells = self.inputs + (self.output,)
        if all(c[0] == cells[0][0] for c in cells):
            return "row"
        if all(c[1] == cells[0][1] for c in cells):
            return "col"
        return "none"

    def cells(self) -> Tuple[Cell, ...]:
        return self.inputs + (self.output,)


@dataclass
class Schedule:
    cycles: List[List[MicroOp]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cycles)

    def ops(self) -> Iterable[MicroOp]:
        for cyc in self.cycles:
            yield from cyc

    def op_count(self) -> int:
        return sum(len(c) for c in self.cycles if not (c and c[0].kind == INIT))


@dataclass(frozen=True)
class Stats:
    cycles: int
    mems: int


def program(pl: Placement) -> List[MicroOp]:
    """Unscheduled op list in a valid sequential order."""
    if not pl.routed:
        raise ScheduleError("unschedulable", "placement has no routed alignment copies")
    ops: List[MicroOp] = []
    ops.extend(MicroOp(NOT_COPY, (c.src,), c.dst) for c in pl.copies)
    for tile in sorted(pl.tiles.values(), key=lambda t: (t.level, t.sid)):
        for cells, out in zip(tile.literal_cells, tile.term_cells):
            ops.append(MicroOp(NOR_ROW, tuple(cells), out, tag=("logic", tile.level, 0)))
        ops.append(MicroOp(NOR_COL, tile.term_cells, tile.gate_cell, tag=("logic", tile.level, 1)))
        if tile.final_cell is not None:
            ops.append(MicroOp(NOR_COL, (tile.gate_cell,), tile.final_cell, tag=("logic", tile.level, 2)))
    # copies read tile outputs, so order by dataflow
    writer = {op.output: i for i, op in enumerate(ops)}
    done, order = set(), []

    def visit(i):
        stack = [(i, False)]
        while stack:
            j, expanded = stack.pop()
            if j in done:
                continue
            if expanded:
                done.add(j)
                order.append(ops[j])
                continue
            stack.append((j, True))
            for c in ops[j].inputs:
                w = writer.get(c)
                if w is not None and w not in done:
                    stack.append((w, False))

    for i in range(len(ops)):
        visit(i)
    return order


def _is_logic(op: MicroOp) -> bool:
    return op.kind in (NOR_ROW, NOR_COL)


def _line(op: MicroOp, cell: Cell) -> int:
    return cell[0] if op.orientation() == "row" else cell[1]


def _cross(op: MicroOp, cell: Cell) -> int:
    return cell[1] if op.orientation() == "row" else cell[0]


def compatible(ops: Sequence[MicroOp]) -> Optional[str]:
    """None when the ops may run in one cycle, otherwise the reason they may not."""
    if not ops:
        return None
    for op in ops:
        if op.orientation() == "none":
            return f"op {op} is not aligned"
    if len({_is_logic(op) for op in ops}) > 1:
        return "logic and copy ops mixed"
    orient = {op.orientation() for op in ops}
    if len(orient) > 1:
        # single-cell ops are both row- and column-aligned; only matters for mixed kinds
        return "mixed orientations"
    seen = set()
    for op in ops:
        for c in op.cells():
            if c in seen:
                return f"cell {c} used twice"
            seen.add(c)
    if not _is_logic(ops[0]):
        # strict: same source line position and same destination position on distinct lines
        ins = {_cross(op, op.inputs[0]) for op in ops}
        outs = {_cross(op, op.output) for op in ops}
        lines = [_line(op, op.output) for op in ops]
        if len(ins) > 1 or len(outs) > 1 or len(set(lines)) != len(lines):
            return "copies not aligned"
        return None
    in_x = {_cross(op, c) for op in ops for c in op.inputs}
    out_x = {_cross(op, op.output) for op in ops}
    if in_x & out_x:
        return "an input line is also an output line"
    spans: Dict[int, List[Tuple[int, int]]] = {}
    for op in ops:
        xs = [_cross(op, c) for c in op.cells()]
        spans.setdefault(_line(op, op.output), []).append((min(xs), max(xs)))
    for segs in spans.values():
        segs.sort()
        for (a0, a1), (b0, b1) in zip(segs, segs[1:]):
            if b0 <= a1:
                return "overlapping spans on one line"
    return None


def _orient_key(op: MicroOp) -> Tuple[bool, str]:
    return (_is_logic(op), op.orientation())


def _class_of(op: MicroOp) -> Tuple:
    if op.tag:
        return op.tag
    o = op.orientation()
    return ("copy", o, _cross(op, op.inputs[0]), _cross(op, op.output))


def build_schedule(pl: Placement, net: Optional[NonNetlist] = None,
                   charge_init: bool = False) -> Schedule:
    """Class-grouped list scheduling.

    Every cycle is either all logic or all copies, so the length is the number
    of groups formed. Ops are grouped by class (level and stage for logic,
    line pair for copies); a class is preferably issued once all of its ops
    are ready, so one class costs one cycle where alignment allows.
    Remaining ties go to the longest path to a sink.
    """
    ops = program(pl)
    writer = {op.output: i for i, op in enumerate(ops)}
    preds = [sorted({writer[c] for c in op.inputs if c in writer}) for op in ops]
    succs: List[List[int]] = [[] for _ in ops]
    for i, ps in enumerate(preds):
        for p in ps:
            succs[p].append(i)
    height = [0] * len(ops)
    for i in reversed(range(len(ops))):
        height[i] = 1 + max((height[s] for s in succs[i]), default=0)
    for op in ops:
        if op.orientation() == "none":
            raise ScheduleError("unschedulable", f"op {op} is not aligned")
    klass = [_class_of(op) for op in ops]
    pending: Dict[Tuple, int] = {}
    for k in klass:
        pending[k] = pending.get(k, 0) + 1
    remaining = [len(p) for p in preds]
    ready = {i for i, r in enumerate(remaining) if r == 0}
    sched = Schedule()
    while ready:
        groups: Dict[Tuple, List[int]] = {}
        for i in ready:
            groups.setdefault(klass[i], []).append(i)

        def rank(item):
            key, members = item
            complete = len(members) == pending[key]
            return (not complete, -max(height[i] for i in members), -len(members), key)

        key, members = min(groups.items(), key=rank)
        seed = sorted(members, key=lambda i: (-height[i], i))
        cycle: List[int] = []
        chosen: List[MicroOp] = []
        # fill with the chosen class first, then any other ready op that still fits
        others = sorted((i for i in ready if klass[i] != key), key=lambda i: (-height[i], i))
        for i in seed + others:
            if cycle and _orient_key(ops[i]) != _orient_key(chosen[0]):
                continue
            if not cycle or compatible(chosen + [ops[i]]) is None:
                cycle.append(i)
                chosen.append(ops[i])
        if charge_init:
            sched.cycles.append([MicroOp(INIT, (), chosen[0].output, tuple(op.output for op in chosen))])
        sched.cycles.append(chosen)
        for i in cycle:
            ready.discard(i)
            pending[klass[i]] -= 1
            for s in succs[i]:
                remaining[s] -= 1
                if remaining[s] == 0:
                    ready.add(s)
    if sum(len(c) for c in sched.cycles if c[0].kind != INIT) != len(ops):
        raise ScheduleError("unschedulable", "dependency cycle among ops")
    return sched


def count_stats(sched: Schedule, pl: Placement) -> Stats:
    return Stats(len(sched), pl.mems())


def lifetimes(sched: Schedule, pl: Placement) -> Dict[Cell, Tuple[int, int]]:
    """(birth, death) cycle per used cell; loaded cells are born at cycle 0."""
    birth: Dict[Cell, int] = {c: 0 for c in pl.loads}
    death: Dict[Cell, int] = {}
    for k, cyc in enumerate(sched.cycles, 1):
        for op in cyc:
            if op.kind == INIT:
                continue
            birth.setdefault(op.output, k)
            for c in op.inputs:
                death[c] = k
    end = len(sched)
    for c in pl.po_cells:
        death[c] = end
    return {c: (b, max(b, death.get(c, b))) for c, b in birth.items()}


def check_legality(sched: Schedule, pl: Placement) -> List[str]:
    """Independent re-check of alignment, dataflow and single assignment.

    Returns a list of violations; empty means legal.
    """
    errors: List[str] = []
    written: Dict[Cell, int] = {c: 0 for c in pl.loads}
    for c, role in pl.cells.items():
        r, col = c
        if not (0 <= r < pl.grid_rows and 0 <= col < pl.grid_cols):
            errors.append(f"cell {c} outside the grid")
    for k, cyc in enumerate(sched.cycles, 1):
        if not cyc:
            errors.append(f"cycle {k} is empty")
            continue
        if cyc[0].kind == INIT:
            continue
        for op in cyc:
            if op.kind not in KINDS:
                errors.append(f"cycle {k}: unknown op kind {op.kind}")
            if op.kind == NOT_COPY and len(op.inputs) != 1:
                errors.append(f"cycle {k}: copy with {len(op.inputs)} inputs")
            rows = {c[0] for c in op.cells()}
            cols = {c[1] for c in op.cells()}
            if op.kind == NOR_ROW and len(rows) != 1:
                errors.append(f"cycle {k}: row NOR spans rows {sorted(rows)}")
            if op.kind == NOR_COL and len(cols) != 1:
                errors.append(f"cycle {k}: column NOR spans columns {sorted(cols)}")
            if op.kind == NOT_COPY and len(rows) != 1 and len(cols) != 1:
                errors.append(f"cycle {k}: copy {op.inputs[0]}->{op.output} is not collinear")
            for c in op.inputs:
                if c not in written or written[c] >= k:
                    errors.append(f"cycle {k}: reads {c} before it is written")
            for c in op.cells():
                if c not in pl.cells:
                    errors.append(f"cycle {k}: cell {c} has no role in the placement")
        reason = compatible(cyc)
        if reason is not None:
            errors.append(f"cycle {k}: {reason}")
        for op in cyc:
            if op.output in written:
                errors.append(f"cycle {k}: cell {op.output} written twice")
            written[op.output] = k
    for c in pl.po_cells:
        if c not in written:
            errors.append(f"output cell {c} is never written")
    return errors


# ---------------------------------------------------------------- trace format

def emit_trace(sched: Schedule, pl: Placement) -> str:
    """One line per cycle: ``<n>: KIND r,c;r,c>r,c | ...``. Header lines start with '#'."""
    lines = [f"# grid {pl.grid_rows}x{pl.grid_cols}"]
    for cell, s in sorted(pl.loads.items()):
        lines.append(f"# load {cell[0]},{cell[1]} {s}")
    for i, cell in enumerate(pl.po_cells):
        lines.append(f"# po {i} {cell[0]},{cell[1]}")

    def fmt(c):
        return f"{c[0]},{c[1]}"

    for k, cyc in enumerate(sched.cycles, 1):
        parts = []
        for op in cyc:
            if op.kind == INIT:
                parts.append("INIT " + ";".join(fmt(c) for c in op.outputs))
            else:
                parts.append(f"{op.kind} " + ";".join(fmt(c) for c in op.inputs) + ">" + fmt(op.output))
        lines.append(f"{k}: " + " | ".join(parts))
    return "\n".join(lines) + "\n"


@dataclass
class Trace:
    grid: Tuple[int, int]
    loads: Dict[Cell, int]
    po_cells: List[Cell]
    schedule: Schedule


def parse_trace(text: str) -> Trace:
    grid = (0, 0)
    loads: Dict[Cell, int] = {}
    pos: Dict[int, Cell] = {}
    sched = Schedule()

    def cell(tok):
        r, c = tok.split(",")
        return int(r), int(c)

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            t = line[1:].split()
            if t[0] == "grid":
                r, c = t[1].split("x")
                grid = (int(r), int(c))
            elif t[0] == "load":
                loads[cell(t[1])] = int(t[2])
            elif t[0] == "po":
                pos[int(t[1])] = cell(t[2])
            continue
        _, body = line.split(":", 1)
        cyc = []
        for part in body.split("|"):
            kind, args = part.split()
            if kind == INIT:
                outs = tuple(cell(x) for x in args.split(";"))
                cyc.append(MicroOp(INIT, (), outs[0], outs))
            else:
                ins, out = args.split(">")
                cyc.append(MicroOp(kind, tuple(cell(x) for x in ins.split(";")), cell(out)))
        sched.cycles.append(cyc)
    return Trace(grid, loads, [pos[i] for i in sorted(pos)], sched)
