"""And-inverter graphs.

Literals follow the AIGER convention: ``2 * node + complemented``. Node 0 is
constant false, nodes ``1..pi_count`` are primary inputs and AND nodes
follow in topological order.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .netlist_io import RawNetlist


def lit_node(lit: int) -> int:
    return lit >> 1


def lit_compl(lit: int) -> int:
    return lit & 1


@dataclass(frozen=True)
class Aig:
    pi_count: int
    ands: Tuple[Tuple[int, int], ...]
    pos: Tuple[int, ...]
    pi_names: Tuple[str, ...] = ()
    po_names: Tuple[str, ...] = ()

    @property
    def node_count(self) -> int:
        return 1 + self.pi_count + len(self.ands)

    def is_pi(self, node: int) -> bool:
        return 1 <= node <= self.pi_count

    def is_and(self, node: int) -> bool:
        return node > self.pi_count

    def fanins(self, node: int) -> Tuple[int, int]:
        return self.ands[node - self.pi_count - 1]

    def and_nodes(self) -> range:
        return range(self.pi_count + 1, self.node_count)

    def levels(self) -> List[int]:
        lev = [0] * self.node_count
        for n in self.and_nodes():
            a, b = self.fanins(n)
            lev[n] = 1 + max(lev[a >> 1], lev[b >> 1])
        return lev

    def depth(self) -> int:
        lev = self.levels()
        return max((lev[p >> 1] for p in self.pos), default=0)

    def fanout_counts(self) -> List[int]:
        fo = [0] * self.node_count
        for n in self.and_nodes():
            for f in self.fanins(n):
                fo[f >> 1] += 1
        for p in self.pos:
            fo[p >> 1] += 1
        return fo

    def simulate_words(self, words: Sequence[int], mask: int) -> List[int]:
        """Bit-parallel simulation; ``words[i]`` packs many patterns of input i."""
        if len(words) != self.pi_count:
            raise ValueError(f"expected {self.pi_count} input words, got {len(words)}")
        val = [0] * self.node_count
        val[1:1 + self.pi_count] = [w & mask for w in words]

        def lv(lit):
            v = val[lit >> 1]
            return (v ^ mask) if lit & 1 else v

        for n in self.and_nodes():
            a, b = self.fanins(n)
            val[n] = lv(a) & lv(b)
        return [lv(p) for p in self.pos]


def simulate(aig: Aig, pattern: Sequence[int]) -> List[int]:
    if len(pattern) != aig.pi_count:
        raise ValueError(f"pattern has {len(pattern)} bits, AIG has {aig.pi_count} inputs")
    return aig.simulate_words([int(bool(b)) for b in pattern], 1)


def exhaustive_words(n: int) -> Tuple[List[int], int]:
    """Input words enumerating all 2**n patterns (pattern index = bit position)."""
    size = 1 << n
    mask = (1 << size) - 1
    words = []
    for i in range(n):
        block = (1 << (1 << i)) - 1
        period = 1 << (i + 1)
        w = 0
        for start in range(1 << i, size, period):
            w |= block << start
        words.append(w)
    return words, mask


def truth_tables(aig: Aig) -> List[int]:
    words, mask = exhaustive_words(aig.pi_count)
    return aig.simulate_words(words, mask)


class AigBuilder:
    """Incremental AIG construction with structural hashing."""

    def __init__(self):
        self.pi_count = 0
        self._ands: List[Tuple[int, int]] = []
        self._strash: Dict[Tuple[int, int], int] = {}
        self._frozen_pis = False

    def add_pi(self) -> int:
        if self._ands:
            raise RuntimeError("inputs must be created before AND nodes")
        self.pi_count += 1
        return 2 * self.pi_count

    def add_and(self, a: int, b: int) -> int:
        if a > b:
            a, b = b, a
        if a == 0:
            return 0
        if a == 1:
            return b
        if a == b:
            return a
        if a ^ b == 1:
            return 0
        key = (a, b)
        hit = self._strash.get(key)
        if hit is not None:
            return hit
        self._ands.append(key)
        lit = 2 * (self.pi_count + len(self._ands))
        self._strash[key] = lit
        return lit

    def add_or(self, a: int, b: int) -> int:
        return self.add_and(a ^ 1, b ^ 1) ^ 1

    def add_and_chain(self, lits: Iterable[int]) -> int:
        acc = 1
        for x in lits:
            acc = self.add_and(acc, x)
        return acc

    def add_or_chain(self, lits: Iterable[int]) -> int:
        acc = 0
        for x in lits:
            acc = self.add_or(acc, x)
        return acc

    def build(self, pos: Sequence[int], pi_names: Sequence[str] = (),
              po_names: Sequence[str] = ()) -> Aig:
        return Aig(self.pi_count, tuple(self._ands), tuple(pos), tuple(pi_names), tuple(po_names))


def from_raw(netlist: RawNetlist) -> Aig:
    """Technology decomposition: every cube becomes an AND chain, every cover an OR chain."""
    b = AigBuilder()
    sig: Dict[str, int] = {name: b.add_pi() for name in netlist.primary_inputs}
    for node in netlist.nodes:
        terms = []
        for cube in node.cubes:
            lits = [sig[name] ^ (ch == "0") for name, ch in zip(node.inputs, cube) if ch != "-"]
            terms.append(b.add_and_chain(lits))
        sig[node.output] = b.add_or_chain(terms)
    pos = [sig[o] for o in netlist.primary_outputs]
    return b.build(pos, netlist.primary_inputs, netlist.primary_outputs)


def _balanced_and(b: AigBuilder, operands: List[Tuple[int, int]]) -> Tuple[int, int]:
    """Combine (level, lit) operands shallowest-first; returns (level, lit)."""
    heap = list(operands)
    heapq.heapify(heap)
    while len(heap) > 1:
        la, a = heapq.heappop(heap)
        lb, c = heapq.heappop(heap)
        lit = b.add_and(a, c)
        if lit in (0, 1) or lit == a or lit == c:
            lev = la if lit == a else lb if lit == c else 0
        else:
            lev = 1 + max(la, lb)
        heapq.heappush(heap, (lev, lit))
    return heap[0] if heap else (0, 1)


def and_balance(aig: Aig) -> Aig:
    """Rebuild maximal AND trees as depth-minimal binary trees.

    A tree is grown through non-complemented fanins that have a single fanout
    and are not primary outputs; everything else is a tree leaf.
    """
    fanout = aig.fanout_counts()
    po_nodes = {p >> 1 for p in aig.pos}
    b = AigBuilder()
    new_lit: Dict[int, int] = {0: 0}
    new_lev: Dict[int, int] = {0: 0}
    for i in range(1, aig.pi_count + 1):
        new_lit[i] = b.add_pi()
        new_lev[i] = 0

    def absorbable(lit: int) -> bool:
        n = lit >> 1
        return not (lit & 1) and aig.is_and(n) and fanout[n] == 1 and n not in po_nodes

    def leaves_of(root: int) -> List[int]:
        out, stack = [], list(aig.fanins(root))
        while stack:
            f = stack.pop()
            if absorbable(f):
                stack.extend(aig.fanins(f >> 1))
            else:
                out.append(f)
        return out

    compl_ref = {f >> 1 for n in aig.and_nodes() for f in aig.fanins(n) if f & 1}
    # absorbed nodes are referenced only from inside their tree, so only roots are rebuilt
    roots = [n for n in aig.and_nodes()
             if fanout[n] != 1 or n in po_nodes or n in compl_ref]
    for n in roots:
        ops = [(new_lev[f >> 1], new_lit[f >> 1] ^ (f & 1)) for f in sorted(set(leaves_of(n)))]
        new_lev[n], new_lit[n] = _balanced_and(b, ops)
    pos = [new_lit[p >> 1] ^ (p & 1) for p in aig.pos]
    return _cleanup(b.build(pos, aig.pi_names, aig.po_names))


def _cleanup(aig: Aig) -> Aig:
    """Drop AND nodes unreachable from the outputs."""
    live = [False] * aig.node_count
    for p in aig.pos:
        live[p >> 1] = True
    for n in reversed(aig.and_nodes()):
        if live[n]:
            for f in aig.fanins(n):
                live[f >> 1] = True
    b = AigBuilder()
    m = {0: 0}
    for i in range(1, aig.pi_count + 1):
        m[i] = b.add_pi()
    for n in aig.and_nodes():
        if live[n]:
            x, y = aig.fanins(n)
            m[n] = b.add_and(m[x >> 1] ^ (x & 1), m[y >> 1] ^ (y & 1))
    pos = [m[p >> 1] ^ (p & 1) for p in aig.pos]
    return b.build(pos, aig.pi_names, aig.po_names)
