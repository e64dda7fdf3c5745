"""Functional simulation of MAGIC micro-op schedules on a crossbar."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .aig import Aig, exhaustive_words
from .placer import Cell
from .scheduler import INIT, NOT_COPY, Schedule

UNKNOWN = None


class SimulationError(RuntimeError):
    def __init__(self, kind: str, message: str, cell: Cell | None = None, cycle: int | None = None):
        self.kind = kind
        self.cell = cell
        self.cycle = cycle
        super().__init__(f"{kind}: {message}")


class CrossbarState:
    """Sparse three-valued cell array; absent cells are unknown."""

    def __init__(self, rows: int, cols: int):
        self.rows = rows
        self.cols = cols
        self.values: Dict[Cell, int] = {}

    def _check(self, cell: Cell, cycle: int) -> None:
        r, c = cell
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise SimulationError("out-of-range", f"cell {cell} outside {self.rows}x{self.cols}", cell, cycle)

    def read(self, cell: Cell, cycle: int) -> int:
        self._check(cell, cycle)
        v = self.values.get(cell, UNKNOWN)
        if v is UNKNOWN:
            raise SimulationError("uninitialized-read", f"cell {cell} read at cycle {cycle}", cell, cycle)
        return v

    def write(self, cell: Cell, value: int, cycle: int) -> None:
        self._check(cell, cycle)
        self.values[cell] = value


def run(sched: Schedule, grid: Tuple[int, int], loads: Dict[Cell, int], po_cells: Sequence[Cell],
        pi_values: Sequence[int], consts: Dict[int, int] | None = None,
        pi_count: int | None = None, dump: Optional[List[Dict[Cell, int]]] = None) -> List[int]:
    """Execute a schedule for one input vector and return the output cell values.

    ``loads`` maps cells to source signals; signals below ``pi_count`` are
    primary inputs, the others constants looked up in ``consts``.
    """
    n = len(pi_values) if pi_count is None else pi_count
    if len(pi_values) != n:
        raise ValueError(f"expected {n} input values, got {len(pi_values)}")
    consts = consts or {}
    st = CrossbarState(*grid)
    for cell, s in loads.items():
        v = pi_values[s] if s < n else consts[s]
        st.write(cell, int(bool(v)), 0)
    for k, cyc in enumerate(sched.cycles, 1):
        results = []
        for op in cyc:
            if op.kind == INIT:
                continue
            vals = [st.read(c, k) for c in op.inputs]
            results.append((op.output, 0 if any(vals) else 1))
        # all ops of a cycle read before any writes land
        for cell, v in results:
            st.write(cell, v, k)
        if dump is not None:
            dump.append(dict(st.values))
    return [st.read(c, len(sched.cycles) + 1) for c in po_cells]


def run_words(sched: Schedule, loads: Dict[Cell, int], po_cells: Sequence[Cell],
              words: Sequence[int], mask: int, consts: Dict[int, int] | None = None) -> List[int]:
    """Bit-parallel variant of :func:`run` without bounds checks; used for verification."""
    consts = consts or {}
    n = len(words)
    vals: Dict[Cell, int] = {}
    for cell, s in loads.items():
        vals[cell] = (words[s] & mask) if s < n else (mask if consts[s] else 0)
    for k, cyc in enumerate(sched.cycles, 1):
        results = []
        for op in cyc:
            if op.kind == INIT:
                continue
            acc = 0
            for c in op.inputs:
                v = vals.get(c)
                if v is None:
                    raise SimulationError("uninitialized-read", f"cell {c} read at cycle {k}", c, k)
                acc |= v
            results.append((op.output, acc ^ mask))
        for cell, v in results:
            vals[cell] = v
    out = []
    for c in po_cells:
        if c not in vals:
            raise SimulationError("uninitialized-read", f"output cell {c} never written", c, len(sched.cycles) + 1)
        out.append(vals[c])
    return out


@dataclass
class Verdict:
    passed: bool
    vectors: int
    counterexample: Optional[Tuple[List[int], List[int], List[int]]] = None  # inputs, expected, got

    def __bool__(self) -> bool:
        return self.passed


def verify_equivalence(sched: Schedule, loads: Dict[Cell, int], po_cells: Sequence[Cell],
                       reference: Aig, vectors: int | str = "exhaustive", seed: int = 0,
                       consts: Dict[int, int] | None = None, chunk: int = 256) -> Verdict:
    """Compare the crossbar against AIG simulation, exhaustively or on seeded random vectors."""
    n = reference.pi_count
    if vectors == "exhaustive":
        words, mask = exhaustive_words(n)
        batches = [(words, mask, 1 << n)]
    else:
        rng = random.Random(seed)
        total = int(vectors)
        batches = []
        left = total
        while left > 0:
            m = min(chunk, left)
            mask = (1 << m) - 1
            batches.append(([rng.getrandbits(m) for _ in range(n)], mask, m))
            left -= m
    tested = 0
    for words, mask, m in batches:
        want = reference.simulate_words(words, mask)
        got = run_words(sched, loads, po_cells, words, mask, consts)
        diff = 0
        for a, b in zip(want, got):
            diff |= a ^ b
        if diff:
            bit = (diff & -diff).bit_length() - 1
            ins = [(w >> bit) & 1 for w in words]
            return Verdict(False, tested + bit + 1,
                           (ins, [(w >> bit) & 1 for w in want], [(g >> bit) & 1 for g in got]))
        tested += m
    return Verdict(True, tested)
