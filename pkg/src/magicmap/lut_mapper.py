"""Priority-cut k-LUT mapping with optional SOP-balanced delay evaluation.

Truth tables are Python ints: bit ``m`` holds the function value for the
assignment where leaf ``j`` equals ``(m >> j) & 1``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .aig import Aig
from .netlist_io import RawNetlist, RawNode, make_netlist


def full_mask(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def var_mask(i: int, n: int) -> int:
    """Table of the projection function x_i over n variables."""
    size = 1 << n
    block = (1 << (1 << i)) - 1
    w = 0
    for start in range(1 << i, size, 1 << (i + 1)):
        w |= block << start
    return w


@lru_cache(maxsize=None)
def _swap_masks(i: int, n: int) -> Tuple[int, int]:
    a = var_mask(i, n) & ~var_mask(i + 1, n)
    b = var_mask(i + 1, n) & ~var_mask(i, n)
    return a, b


def swap_adjacent(tt: int, i: int, n: int) -> int:
    a, b = _swap_masks(i, n)
    s = 1 << i
    return (tt & ~(a | b)) | ((tt & a) << s) | ((tt & b) >> s)


def expand_truth(tt: int, sub: Sequence[int], sup: Sequence[int]) -> int:
    """Re-express a table over leaves ``sub`` as a table over the sorted superset ``sup``."""
    cur = list(sub)
    n = len(cur)
    for q, leaf in enumerate(sup):
        if q < len(cur) and cur[q] == leaf:
            continue
        # new don't-care variable on top, then bubble it down to position q
        tt |= tt << (1 << n)
        n += 1
        for i in range(n - 2, q - 1, -1):
            tt = swap_adjacent(tt, i, n)
        cur.insert(q, leaf)
    return tt


def cofactors(tt: int, i: int, n: int) -> Tuple[int, int]:
    v = var_mask(i, n)
    s = 1 << i
    lo = tt & ~v & full_mask(n)
    hi = tt & v
    return lo | (lo << s), hi | (hi >> s)


# --- SOP covers ---------------------------------------------------------

@dataclass(frozen=True)
class SopCover:
    """Sum of products over ``nvars`` leaves; each cube is (positive mask, negative mask)."""

    nvars: int
    cubes: Tuple[Tuple[int, int], ...]

    def truth(self) -> int:
        n = self.nvars
        full = full_mask(n)
        out = 0
        for pos, neg in self.cubes:
            t = full
            for j in range(n):
                if pos >> j & 1:
                    t &= var_mask(j, n)
                elif neg >> j & 1:
                    t &= ~var_mask(j, n) & full
            out |= t
        return out

    def evaluate_words(self, words: Sequence[int], mask: int) -> int:
        out = 0
        for pos, neg in self.cubes:
            t = mask
            for j, w in enumerate(words):
                if pos >> j & 1:
                    t &= w
                elif neg >> j & 1:
                    t &= ~w & mask
            out |= t
        return out

    def literals(self, cube: Tuple[int, int]) -> List[Tuple[int, bool]]:
        """(leaf index, positive?) pairs of a cube, in leaf order."""
        pos, neg = cube
        return [(j, bool(pos >> j & 1)) for j in range(self.nvars) if (pos | neg) >> j & 1]

    def support(self) -> List[int]:
        used = 0
        for pos, neg in self.cubes:
            used |= pos | neg
        return [j for j in range(self.nvars) if used >> j & 1]

    def is_tautology(self) -> bool:
        return any(pos == 0 and neg == 0 for pos, neg in self.cubes)

    def to_blif_cubes(self) -> Tuple[str, ...]:
        rows = []
        for pos, neg in self.cubes:
            rows.append("".join("1" if pos >> j & 1 else "0" if neg >> j & 1 else "-"
                                for j in range(self.nvars)))
        return tuple(rows)


def _isop(lower: int, upper: int, n: int) -> Tuple[List[Tuple[int, int]], int]:
    if lower == 0:
        return [], 0
    full = full_mask(n)
    if upper & full == full:
        return [(0, 0)], full
    var = n - 1
    while var >= 0:
        l0, l1 = cofactors(lower, var, n)
        u0, u1 = cofactors(upper, var, n)
        if l0 != l1 or u0 != u1:
            break
        var -= 1
    bit = 1 << var
    c0, t0 = _isop(l0 & ~u1 & full, u0, n)
    c1, t1 = _isop(l1 & ~u0 & full, u1, n)
    rest = ((l0 & ~t0) | (l1 & ~t1)) & full
    cs, ts = _isop(rest, u0 & u1, n)
    vm = var_mask(var, n)
    cubes = [(p, q | bit) for p, q in c0] + [(p | bit, q) for p, q in c1] + cs
    tt = (t0 & ~vm & full) | (t1 & vm) | ts
    return cubes, tt


@lru_cache(maxsize=1 << 16)
def isop(truth: int, n: int) -> SopCover:
    """Irredundant sum of products (Minato-Morreale) of a completely specified function."""
    truth &= full_mask(n)
    cubes, tt = _isop(truth, truth, n)
    assert tt == truth
    cubes.sort(key=lambda c: (bin(c[0] | c[1]).count("1"), _cube_key(c, n)))
    return SopCover(n, tuple(cubes))


def _cube_key(cube: Tuple[int, int], n: int) -> Tuple[int, ...]:
    pos, neg = cube
    return tuple(0 if pos >> j & 1 else 1 if neg >> j & 1 else 2 for j in range(n))


def _huffman_depth(arrivals: Sequence[int]) -> int:
    if not arrivals:
        return 0
    heap = list(arrivals)
    heapq.heapify(heap)
    while len(heap) > 1:
        a = heapq.heappop(heap)
        b = heapq.heappop(heap)
        heapq.heappush(heap, max(a, b) + 1)
    return heap[0]


def sop_balanced_depth(cover: SopCover, leaf_arrival: Sequence[int]) -> int:
    """Arrival time of the cover built as balanced AND trees feeding a balanced OR tree."""
    cube_depths = [_huffman_depth([leaf_arrival[j] for j, _ in cover.literals(c)])
                   for c in cover.cubes]
    return _huffman_depth(cube_depths)


# --- cuts ----------------------------------------------------------------

@dataclass(frozen=True)
class Cut:
    leaves: Tuple[int, ...]
    truth: int

    def __len__(self) -> int:
        return len(self.leaves)


def sop_of_cut(cut: Cut) -> SopCover:
    return isop(cut.truth, len(cut.leaves))


def _cut_depth(cut: Cut, arrival: Sequence[int], balance: bool) -> int:
    if balance:
        return sop_balanced_depth(sop_of_cut(cut), [arrival[x] for x in cut.leaves])
    return 1 + max((arrival[x] for x in cut.leaves), default=-1)


def _merge(a: Cut, ca: int, b: Cut, cb: int, k: int) -> Optional[Cut]:
    leaves = tuple(sorted(set(a.leaves) | set(b.leaves)))
    if len(leaves) > k:
        return None
    n = len(leaves)
    full = full_mask(n)
    ta = expand_truth(a.truth, a.leaves, leaves)
    tb = expand_truth(b.truth, b.leaves, leaves)
    if ca:
        ta = ~ta & full
    if cb:
        tb = ~tb & full
    return Cut(leaves, ta & tb)


def _trivial(node: int) -> Cut:
    return Cut((node,), 0b10)


def _rank_cuts(aig: Aig, k: int, c: int, balance: bool,
               tie_arrival: Optional[Sequence[int]] = None):
    """Bottom-up priority cuts; returns (cuts per node, best cut per node, arrival)."""
    cuts: List[List[Cut]] = [[] for _ in range(aig.node_count)]
    best: List[Optional[Cut]] = [None] * aig.node_count
    arrival = [0] * aig.node_count
    fanout = [max(f, 1) for f in aig.fanout_counts()]
    flow = [0.0] * aig.node_count
    for i in range(1, aig.pi_count + 1):
        cuts[i] = [_trivial(i)]
    cuts[0] = [Cut((), 0)]
    for n in aig.and_nodes():
        fa, fb = aig.fanins(n)
        cand: Dict[Tuple[int, ...], Cut] = {}
        for x in cuts[fa >> 1]:
            for y in cuts[fb >> 1]:
                m = _merge(x, fa & 1, y, fb & 1, k)
                if m is not None and m.leaves not in cand:
                    cand[m.leaves] = m
        # drop cuts dominated by a subset cut
        sets = sorted(cand, key=len)
        kept = []
        for leaves in sets:
            s = set(leaves)
            if not any(set(o) <= s for o in kept):
                kept.append(leaves)
        scored = []
        for leaves in kept:
            cut = cand[leaves]
            d = _cut_depth(cut, arrival, balance)
            tie = max((tie_arrival[x] for x in leaves), default=0) if tie_arrival else 0
            area = 1.0 + sum(flow[x] / fanout[x] for x in leaves)
            scored.append(((d, tie, round(area, 9), len(leaves), leaves), cut))
        scored.sort(key=lambda t: t[0])
        chosen = [cut for _, cut in scored[:c]]
        if chosen:
            best[n] = chosen[0]
            arrival[n] = scored[0][0][0]
            flow[n] = scored[0][0][2]
        cuts[n] = chosen + [_trivial(n)]
    return cuts, best, arrival


def enumerate_cuts(aig: Aig, k: int, c: int, balance: bool = False) -> List[List[Cut]]:
    if not 2 <= k <= 10:
        raise ValueError("k must lie in [2, 10]")
    if c < 1:
        raise ValueError("c must be positive")
    return _rank_cuts(aig, k, c, balance)[0]


# --- LUT netlists --------------------------------------------------------

@dataclass(frozen=True)
class Lut:
    inputs: Tuple[int, ...]  # signal ids
    cover: SopCover
    name: str = ""


@dataclass(frozen=True)
class LutNetlist:
    """Signals ``0..pi_count-1`` are primary inputs; LUT ``j`` drives signal ``pi_count + j``."""

    pi_count: int
    luts: Tuple[Lut, ...]
    po_refs: Tuple[Tuple[int, bool], ...]  # (signal, complemented)
    k: int = 0
    pi_names: Tuple[str, ...] = ()
    po_names: Tuple[str, ...] = ()

    def lut_of(self, signal: int) -> Optional[Lut]:
        return self.luts[signal - self.pi_count] if signal >= self.pi_count else None

    def levels(self) -> List[int]:
        lev = [0] * (self.pi_count + len(self.luts))
        for j, lut in enumerate(self.luts):
            lev[self.pi_count + j] = 1 + max((lev[s] for s in lut.inputs), default=-1)
        return lev

    def depth(self) -> int:
        lev = self.levels()
        return max((lev[s] for s, _ in self.po_refs), default=0)

    def simulate_words(self, words: Sequence[int], mask: int) -> List[int]:
        if len(words) != self.pi_count:
            raise ValueError("wrong number of input words")
        val = [w & mask for w in words]
        for lut in self.luts:
            val.append(lut.cover.evaluate_words([val[s] for s in lut.inputs], mask))
        return [(val[s] ^ mask) if c else val[s] for s, c in self.po_refs]

    def simulate(self, pattern: Sequence[int]) -> List[int]:
        return self.simulate_words([int(bool(b)) for b in pattern], 1)


def _trim(leaves: Sequence[int], cover: SopCover) -> Tuple[List[int], SopCover]:
    """Remove leaves the cover does not depend on."""
    sup = cover.support()
    if len(sup) == len(leaves):
        return list(leaves), cover
    remap = {old: new for new, old in enumerate(sup)}
    cubes = []
    for pos, neg in cover.cubes:
        p = q = 0
        for old, new in remap.items():
            p |= (pos >> old & 1) << new
            q |= (neg >> old & 1) << new
        cubes.append((p, q))
    return [leaves[j] for j in sup], SopCover(len(sup), tuple(cubes))


def map_luts(aig: Aig, k: int, c: int = 8, use_sop_balance: bool = False,
             balance_cut_size: Optional[int] = None) -> LutNetlist:
    """Depth-oriented k-feasible cover of every primary output.

    With ``balance_cut_size`` set, a first SOP-balanced pass over cuts of that
    size provides arrival times that break depth ties in the final k pass.
    """
    if not 2 <= k <= 10:
        raise ValueError("k must lie in [2, 10]")
    tie = None
    if balance_cut_size:
        tie = _rank_cuts(aig, balance_cut_size, c, True)[2]
    _, best, _ = _rank_cuts(aig, k, c, use_sop_balance, tie)

    signal: Dict[int, int] = {i: i - 1 for i in range(1, aig.pi_count + 1)}
    luts: List[Lut] = []
    const_sig: Dict[int, int] = {}

    def const(value: int) -> int:
        if value not in const_sig:
            cover = SopCover(0, ((0, 0),) if value else ())
            luts.append(Lut((), cover, f"const{value}"))
            const_sig[value] = aig.pi_count + len(luts) - 1
        return const_sig[value]

    def build(node: int) -> int:
        # iterative post-order so deep AIGs do not hit the recursion limit
        stack = [(node, False)]
        while stack:
            n, expanded = stack.pop()
            if n in signal:
                continue
            cut = best[n]
            if not expanded:
                stack.append((n, True))
                stack.extend((x, False) for x in cut.leaves if x not in signal and x != 0)
                continue
            cover = sop_of_cut(cut)
            leaves, cover = _trim(cut.leaves, cover)
            if not leaves:
                signal[n] = const(1 if cover.is_tautology() else 0)
                continue
            ins = [signal[x] if x != 0 else const(0) for x in leaves]
            if len(leaves) == 1 and cover.cubes == ((1, 0),):
                signal[n] = ins[0]  # buffer
                continue
            luts.append(Lut(tuple(ins), cover, f"n{n}"))
            signal[n] = aig.pi_count + len(luts) - 1
        return signal[node]

    po_refs = []
    for p in aig.pos:
        n = p >> 1
        if n == 0:
            po_refs.append((const(0), bool(p & 1)))
        else:
            po_refs.append((build(n), bool(p & 1)))
    return LutNetlist(aig.pi_count, tuple(luts), tuple(po_refs), k,
                      aig.pi_names, aig.po_names)


def luts_from_raw(netlist: RawNetlist) -> LutNetlist:
    """Treat every ``.names`` node of a BLIF as one LUT (cover re-derived as an ISOP)."""
    from .aig import exhaustive_words

    index = {name: i for i, name in enumerate(netlist.primary_inputs)}
    luts: List[Lut] = []
    for node in netlist.nodes:
        n = len(node.inputs)
        words, mask = exhaustive_words(n)
        tt = 0
        for cube in node.cubes:
            t = mask
            for ch, w in zip(cube, words):
                if ch == "1":
                    t &= w
                elif ch == "0":
                    t &= ~w & mask
            tt |= t
        leaves, cover = _trim(list(range(n)), isop(tt, n))
        luts.append(Lut(tuple(index[node.inputs[j]] for j in leaves), cover, node.output))
        index[node.output] = len(netlist.primary_inputs) + len(luts) - 1
    po_refs = tuple((index[o], False) for o in netlist.primary_outputs)
    return LutNetlist(len(netlist.primary_inputs), tuple(luts), po_refs,
                      max((len(l.inputs) for l in luts), default=0),
                      netlist.primary_inputs, netlist.primary_outputs)


def lut_netlist_to_raw(net: LutNetlist, name: str = "mapped") -> RawNetlist:
    """BLIF-ready view of a LUT netlist (for external equivalence checking)."""
    names = list(net.pi_names) or [f"pi{i}" for i in range(net.pi_count)]
    nodes = []
    for j, lut in enumerate(net.luts):
        out = f"lut{j}"
        names.append(out)
        nodes.append(RawNode(out, tuple(names[s] for s in lut.inputs), lut.cover.to_blif_cubes()))
    po_names = list(net.po_names) or [f"po{i}" for i in range(len(net.po_refs))]
    for (s, compl), o in zip(net.po_refs, po_names):
        nodes.append(RawNode(o, (names[s],), ("0",) if compl else ("1",)))
    return make_netlist(names[:net.pi_count], po_names, nodes, name)
