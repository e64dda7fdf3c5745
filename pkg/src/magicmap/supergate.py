"""NOR-of-NOR supergates built from LUT covers.

A LUT cover ``f = OR_t AND_i l_ti`` is realised as ``NOT(NOR_t(NOR_i(~l_ti)))``:
every first-level NOR reads the complements of its cube's literals, the
second-level NOR joins the terms and a final NOT restores ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Sequence, Tuple

from .lut_mapper import LutNetlist, SopCover, full_mask, isop

Literal = Tuple[int, bool]  # (signal id, literal is positive)


@dataclass(frozen=True)
class Supergate:
    sid: int                           # signal id driven by this supergate
    terms: Tuple[Tuple[Literal, ...], ...]
    emit_final_not: bool = True
    level: int = 1
    name: str = ""
    inverted: bool = False             # terms realise the complement of the function

    @property
    def gate_polarity(self) -> bool:
        """Polarity held by the outer NOR's cell (True: the function itself)."""
        return self.inverted

    @property
    def size(self) -> int:
        return len(self.terms)

    @property
    def inputs(self) -> Tuple[int, ...]:
        seen: Dict[int, None] = {}
        for term in self.terms:
            for s, _ in term:
                seen.setdefault(s, None)
        return tuple(seen)

    def input_refs(self) -> List[Tuple[int, bool]]:
        """Distinct (signal, needs the negated value) pairs read by the first-level NORs."""
        refs: Dict[Tuple[int, bool], None] = {}
        for term in self.terms:
            for s, positive in term:
                refs.setdefault((s, positive), None)
        return list(refs)

    def op_count(self) -> int:
        return self.size + 1 + int(self.emit_final_not)


def sop_to_non(cover: SopCover, inputs: Sequence[int], sid: int = -1, level: int = 1,
               name: str = "") -> Supergate:
    if not cover.cubes or cover.is_tautology():
        raise ValueError("constant covers are preset cells, not supergates")
    terms = tuple(tuple((inputs[j], positive) for j, positive in cover.literals(c))
                  for c in cover.cubes)
    return Supergate(sid, terms, True, level, name)


@dataclass(frozen=True)
class NonNetlist:
    pi_count: int
    supergates: Tuple[Supergate, ...]
    po_refs: Tuple[Tuple[int, bool], ...]
    consts: Tuple[Tuple[int, int], ...] = ()   # (signal id, value) preset cells
    pi_names: Tuple[str, ...] = ()
    po_names: Tuple[str, ...] = ()

    def by_sid(self) -> Dict[int, Supergate]:
        return {g.sid: g for g in self.supergates}

    @property
    def depth(self) -> int:
        return max((g.level for g in self.supergates), default=0)

    def level(self, l: int) -> List[Supergate]:
        return [g for g in self.supergates if g.level == l]

    def op_count(self) -> int:
        return sum(g.op_count() for g in self.supergates)

    def consumers(self) -> Dict[int, List[Supergate]]:
        out: Dict[int, List[Supergate]] = {}
        for g in self.supergates:
            for s in g.inputs:
                out.setdefault(s, []).append(g)
        return out

    def cascaded_pairs(self) -> int:
        """Edges between two supergates where the producer drives no primary output."""
        sgs = self.by_sid()
        po = {s for s, _ in self.po_refs}
        return sum(1 for g in self.supergates for s in g.inputs if s in sgs and s not in po)

    def evaluate_words(self, words: Sequence[int], mask: int) -> List[int]:
        """NOR-level evaluation honouring which polarity each supergate stores."""
        stored: Dict[int, Tuple[int, bool]] = {}   # sid -> (value, holds f itself)
        for i, w in enumerate(words):
            stored[i] = (w & mask, True)
        for s, v in self.consts:
            stored[s] = (mask if v else 0, True)

        def read(s: int, want_f: bool) -> int:
            v, is_f = stored[s]
            return v if is_f == want_f else v ^ mask

        for g in self.supergates:
            term_outs = []
            for term in g.terms:
                acc = 0
                for s, positive in term:
                    # a positive literal feeds the NOR with ~s, a negative one with s
                    acc |= read(s, not positive)
                term_outs.append(acc ^ mask)
            h = 0
            for t in term_outs:
                h |= t
            h ^= mask  # second-level NOR
            pol = g.gate_polarity
            stored[g.sid] = (h ^ mask, not pol) if g.emit_final_not else (h, pol)
        return [read(s, not c) for s, c in self.po_refs]


def build_non(net: LutNetlist) -> NonNetlist:
    levels = net.levels()
    sgs: List[Supergate] = []
    consts = []
    for j, lut in enumerate(net.luts):
        sid = net.pi_count + j
        if not lut.inputs:
            consts.append((sid, int(lut.cover.is_tautology())))
            continue
        sgs.append(sop_to_non(lut.cover, lut.inputs, sid, levels[sid], lut.name))
    return NonNetlist(net.pi_count, tuple(sgs), net.po_refs, tuple(consts),
                      net.pi_names, net.po_names)


def _truth(g: Supergate) -> int:
    idx = {s: j for j, s in enumerate(g.inputs)}
    tt = 0
    for m in range(1 << len(idx)):
        for term in g.terms:
            if all(((m >> idx[s]) & 1) == int(pos) for s, pos in term):
                tt |= 1 << m
                break
    return tt


def complement_terms(g: Supergate) -> Tuple[Tuple[Literal, ...], ...]:
    """Terms of an irredundant cover of the complement of the realised function."""
    ins = g.inputs
    n = len(ins)
    cover = isop(_truth(g) ^ full_mask(n), n)
    return tuple(tuple((ins[j], pos) for j, pos in cover.literals(c)) for c in cover.cubes)


def refine_cascades(net: NonNetlist, phase: bool = False, max_mismatch: int = 0) -> NonNetlist:
    """Drop final NOTs that no primary output needs.

    Consumers then read the outer NOR's cell directly and absorb the negation
    into their own literals. With ``phase`` set, each supergate may also swap
    its terms for a cover of the complement, so that the stored polarity is
    the one most of its readers want; a final NOT is kept only when some
    primary output wants the other polarity or more than ``max_mismatch``
    readers want it.
    """
    want: Dict[int, List[int]] = {g.sid: [0, 0] for g in net.supergates}   # [reads of ~f, reads of f]
    for g in net.supergates:
        for term in g.terms:
            for s, positive in term:
                if s in want:
                    want[s][0 if positive else 1] += 1
    po_want: Dict[int, set] = {}
    for s, compl in net.po_refs:
        if s in want:
            want[s][0 if compl else 1] += 1
            po_want.setdefault(s, set()).add(not compl)
    out = []
    for g in net.supergates:
        if phase:
            alt = complement_terms(g)
            reads = want[g.sid]      # reads[p] counts readers wanting polarity p
            keep_cost = reads[int(not g.gate_polarity)] + g.size
            flip_cost = reads[int(g.gate_polarity)] + len(alt)
            if alt and flip_cost < keep_cost:
                g = replace(g, terms=alt, inverted=not g.inverted)
        # keep the NOT for outputs wanting the other polarity, or when too many readers would detour
        mismatched = want[g.sid][int(not g.gate_polarity)]
        emit = (any(p != g.gate_polarity for p in po_want.get(g.sid, ()))
                or mismatched > max_mismatch)
        out.append(replace(g, emit_final_not=emit))
    return replace(net, supergates=tuple(out))
