"""Reading and writing combinational netlists.

Supported inputs are a flat BLIF subset (``.model .inputs .outputs .names
.end``) and ASCII AIGER (``aag``) without latches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple


class NetlistError(ValueError):
    """Parse failure. ``kind`` is a stable machine-readable tag."""

    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{kind}: {where}{message}")


@dataclass(frozen=True)
class RawNode:
    output: str
    inputs: Tuple[str, ...]
    # on-set cubes, one character per input from "01-"
    cubes: Tuple[str, ...]

    def evaluate(self, values: Sequence[int]) -> int:
        for cube in self.cubes:
            if all(ch == "-" or int(ch) == v for ch, v in zip(cube, values)):
                return 1
        return 0


@dataclass(frozen=True)
class RawNetlist:
    primary_inputs: Tuple[str, ...]
    primary_outputs: Tuple[str, ...]
    nodes: Tuple[RawNode, ...]
    name: str = "top"

    def simulate(self, pattern: Sequence[int]) -> List[int]:
        if len(pattern) != len(self.primary_inputs):
            raise ValueError("pattern length does not match input count")
        values: Dict[str, int] = dict(zip(self.primary_inputs, pattern))
        for node in self.nodes:
            values[node.output] = node.evaluate([values[i] for i in node.inputs])
        return [values[o] for o in self.primary_outputs]


def _topo_sort(pis: Sequence[str], nodes: Sequence[RawNode]) -> List[RawNode]:
    by_name: Dict[str, RawNode] = {}
    for node in nodes:
        if node.output in by_name or node.output in pis:
            raise NetlistError("duplicate-output", f"signal {node.output!r} defined twice")
        by_name[node.output] = node
    known = set(pis)
    for node in nodes:
        for name in node.inputs:
            if name not in known and name not in by_name:
                raise NetlistError("undefined-signal", f"{name!r} used by {node.output!r} is never driven")

    order: List[RawNode] = []
    state: Dict[str, int] = {}  # 1 = on stack, 2 = done
    for root in nodes:
        if state.get(root.output):
            continue
        stack = [(root, 0)]
        state[root.output] = 1
        while stack:
            node, idx = stack[-1]
            if idx < len(node.inputs):
                stack[-1] = (node, idx + 1)
                name = node.inputs[idx]
                if name in known:
                    continue
                st = state.get(name)
                if st == 1:
                    raise NetlistError("combinational-loop", f"cycle through {name!r}")
                if st is None:
                    state[name] = 1
                    stack.append((by_name[name], 0))
            else:
                stack.pop()
                state[node.output] = 2
                known.add(node.output)
                order.append(node)
    return order


def make_netlist(inputs: Sequence[str], outputs: Sequence[str], nodes: Sequence[RawNode],
                 name: str = "top") -> RawNetlist:
    """Validate and topologically order a netlist."""
    if len(set(inputs)) != len(inputs):
        raise NetlistError("duplicate-output", "repeated primary input")
    ordered = _topo_sort(inputs, nodes)
    defined = set(inputs) | {n.output for n in ordered}
    for o in outputs:
        if o not in defined:
            raise NetlistError("undefined-signal", f"output {o!r} is never driven")
    return RawNetlist(tuple(inputs), tuple(outputs), tuple(ordered), name)


def _logical_lines(text: str):
    """Yield (line number, tokens), joining backslash continuations."""
    pending: List[str] = []
    start = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if start is None:
            start = lineno
        if line.endswith("\\"):
            pending.append(line[:-1])
            continue
        pending.append(line)
        tokens = " ".join(pending).split()
        pending = []
        if tokens:
            yield start, tokens
        start = None
    if pending:
        tokens = " ".join(pending).split()
        if tokens:
            yield start, tokens


def parse_blif(text: str) -> RawNetlist:
    model = "top"
    inputs: List[str] = []
    outputs: List[str] = []
    nodes: List[RawNode] = []
    current: Tuple[str, List[str], List[str], int] | None = None

    def close():
        nonlocal current
        if current is not None:
            out, ins, cubes, _ = current
            nodes.append(RawNode(out, tuple(ins), tuple(cubes)))
            current = None

    ended = False
    for lineno, tokens in _logical_lines(text):
        head = tokens[0]
        if ended:
            raise NetlistError("syntax", "content after .end", lineno)
        if head.startswith("."):
            close()
            if head == ".model":
                model = tokens[1] if len(tokens) > 1 else model
            elif head == ".inputs":
                inputs.extend(tokens[1:])
            elif head == ".outputs":
                outputs.extend(tokens[1:])
            elif head == ".names":
                if len(tokens) < 2:
                    raise NetlistError("syntax", ".names needs an output", lineno)
                current = (tokens[-1], tokens[1:-1], [], lineno)
            elif head == ".end":
                ended = True
            elif head in (".latch", ".mlatch", ".clock"):
                raise NetlistError("unsupported-sequential", f"{head} is not supported", lineno)
            elif head == ".subckt":
                raise NetlistError("unsupported-hierarchy", ".subckt is not supported", lineno)
            else:
                raise NetlistError("syntax", f"unknown directive {head}", lineno)
            continue
        if current is None:
            raise NetlistError("syntax", "cube outside .names", lineno)
        out, ins, cubes, _ = current
        if not ins:
            if tokens != ["1"] and tokens != ["0"]:
                raise NetlistError("syntax", "constant node expects 1 or 0", lineno)
            if tokens == ["1"]:
                cubes.append("")
            continue
        if len(tokens) != 2 or len(tokens[0]) != len(ins) or set(tokens[0]) - set("01-"):
            raise NetlistError("syntax", f"malformed cube {' '.join(tokens)!r}", lineno)
        if tokens[1] != "1":
            raise NetlistError("syntax", "only on-set cubes (output 1) are supported", lineno)
        cubes.append(tokens[0])
    close()
    return make_netlist(inputs, outputs, nodes, model)


def emit_blif(netlist: RawNetlist) -> str:
    lines = [f".model {netlist.name}",
             ".inputs " + " ".join(netlist.primary_inputs),
             ".outputs " + " ".join(netlist.primary_outputs)]
    for node in netlist.nodes:
        lines.append(".names " + " ".join(node.inputs + (node.output,)))
        for cube in node.cubes:
            lines.append(f"{cube} 1" if cube else "1")
    lines.append(".end")
    return "\n".join(lines) + "\n"


def parse_aiger_ascii(text: str):
    """Parse a combinational ``aag`` file into an :class:`~magicmap.aig.Aig`."""
    from .aig import AigBuilder

    rows = [(i, line.split()) for i, line in enumerate(text.splitlines(), 1)]
    rows = [(i, t) for i, t in rows if t]
    if not rows or rows[0][1][0] != "aag":
        raise NetlistError("syntax", "missing 'aag' header", 1)
    header = rows[0][1]
    try:
        m, n_in, n_latch, n_out, n_and = (int(x) for x in header[1:6])
    except ValueError:
        raise NetlistError("syntax", "malformed header", 1) from None
    if n_latch:
        raise NetlistError("unsupported-sequential", "latches are not supported", 1)
    body = rows[1:]
    if len(body) < n_in + n_out + n_and:
        raise NetlistError("syntax", "file truncated")

    def lit(tok: str, lineno: int) -> int:
        try:
            v = int(tok)
        except ValueError:
            raise NetlistError("syntax", f"bad literal {tok!r}", lineno) from None
        if v < 0 or v > 2 * m + 1:
            raise NetlistError("bad-literal", f"literal {v} exceeds maxvar {m}", lineno)
        return v

    pi_lits = [lit(t[0], i) for i, t in body[:n_in]]
    po_rows = body[n_in:n_in + n_out]
    and_rows = body[n_in + n_out:n_in + n_out + n_and]
    builder = AigBuilder()
    mapping = {0: 0, 1: 1}
    for k, pl in enumerate(pi_lits):
        if pl & 1 or pl == 0:
            raise NetlistError("bad-literal", "input literal must be positive and nonzero", body[k][0])
        mapping[pl] = builder.add_pi()
        mapping[pl ^ 1] = mapping[pl] ^ 1
    defs = {}
    for lineno, toks in and_rows:
        if len(toks) != 3:
            raise NetlistError("syntax", "AND line needs 3 literals", lineno)
        lhs, r0, r1 = (lit(t, lineno) for t in toks)
        if lhs & 1 or lhs in mapping or lhs in defs:
            raise NetlistError("bad-literal", f"invalid AND output {lhs}", lineno)
        defs[lhs] = (r0, r1, lineno)

    resolving = set()

    def resolve(v: int) -> int:
        base = v & ~1
        if base not in mapping:
            if base not in defs:
                raise NetlistError("bad-literal", f"literal {v} is undefined")
            if base in resolving:
                raise NetlistError("combinational-loop", f"cycle through literal {base}")
            resolving.add(base)
            r0, r1, _ = defs[base]
            mapping[base] = builder.add_and(resolve(r0), resolve(r1))
            resolving.discard(base)
        return mapping[base] ^ (v & 1)

    for lhs in sorted(defs):
        resolve(lhs)
    pos = [resolve(lit(t[0], i)) for i, t in po_rows]
    names_in = [f"i{k}" for k in range(n_in)]
    names_out = [f"o{k}" for k in range(n_out)]
    for _, toks in body[n_in + n_out + n_and:]:
        if toks[0] == "c":
            break
        if len(toks) >= 2 and toks[0][0] in "io" and toks[0][1:].isdigit():
            idx = int(toks[0][1:])
            target = names_in if toks[0][0] == "i" else names_out
            if idx < len(target):
                target[idx] = toks[1]
    return builder.build(pos, names_in, names_out)


def mapping_report(result, name: str = "top") -> dict:
    """Plain-data view of a compilation result (see :mod:`magicmap.pipeline`)."""
    pl, sched, non = result.placement, result.schedule, result.non

    def cell(c):
        return [c[0], c[1]]

    tiles = []
    for sid in sorted(pl.tiles):
        t = pl.tiles[sid]
        tiles.append({
            "sid": sid, "level": t.level, "origin": t.origin,
            "orientation": "flipped" if t.flipped else "normal",
            "terms": [[[s, pos] for s, pos in term] for term in t.terms],
            "literal_cells": [[cell(c) for c in row] for row in t.literal_cells],
            "term_cells": [cell(c) for c in t.term_cells],
            "gate_cell": cell(t.gate_cell),
            "final_cell": cell(t.final_cell) if t.final_cell is not None else None,
            "shared_input": cell(t.shared) if t.shared is not None else None,
        })
    cycles = []
    for cyc in sched.cycles:
        cycles.append([{"kind": op.kind, "in": [cell(c) for c in op.inputs], "out": cell(op.output)}
                       for op in cyc])
    verdict = None
    if result.verdict is not None:
        verdict = {"passed": result.verdict.passed, "vectors": result.verdict.vectors}
        if result.verdict.counterexample is not None:
            ins, want, got = result.verdict.counterexample
            verdict["counterexample"] = {"inputs": ins, "expected": want, "got": got}
    return {
        "name": name,
        "mode": result.mode,
        "k": result.k,
        "stats": {"cycles": result.stats.cycles, "mems": result.stats.mems},
        "luts": {"count": len(result.luts.luts), "depth": result.luts.depth()},
        "supergates": [{"sid": g.sid, "level": g.level, "size": g.size,
                        "final_not": g.emit_final_not, "name": g.name} for g in non.supergates],
        "placement": {
            "grid": [pl.grid_rows, pl.grid_cols],
            "tiles": tiles,
            "loads": [[cell(c), s] for c, s in sorted(pl.loads.items())],
            "copies": [[cell(cp.src), cell(cp.dst)] for cp in pl.copies],
            "alignment_aux": {str(s): [cell(c) for c in cs] for s, cs in sorted(pl.alignment_aux.items())},
            "po_cells": [cell(c) for c in pl.po_cells],
            "shared_routing": pl.shared_routing,
        },
        "schedule": cycles,
        "verification": verdict,
    }


def emit_mapping_report(result, name: str = "top") -> str:
    import json
    return json.dumps(mapping_report(result, name), indent=1, sort_keys=True) + "\n"
