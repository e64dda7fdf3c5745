"""Small generated combinational benchmarks (BLIF-level netlists)."""

from __future__ import annotations

from typing import Callable, Dict, List

from .netlist_io import RawNetlist, RawNode, make_netlist

XOR2 = ("10", "01")
AND2 = ("11",)
OR2 = ("1-", "-1")
MAJ3 = ("11-", "1-1", "-11")


def c17() -> RawNetlist:
    nand = ("0-", "-0")
    nodes = [RawNode("N10", ("N1", "N3"), nand), RawNode("N11", ("N3", "N6"), nand),
             RawNode("N16", ("N2", "N11"), nand), RawNode("N19", ("N11", "N7"), nand),
             RawNode("N22", ("N10", "N16"), nand), RawNode("N23", ("N16", "N19"), nand)]
    return make_netlist(["N1", "N2", "N3", "N6", "N7"], ["N22", "N23"], nodes, "c17")


def full_adder_luts() -> RawNetlist:
    """Three-level full adder built from two-input LUTs."""
    nodes = [RawNode("n1", ("a", "b"), XOR2), RawNode("t1", ("a", "b"), AND2),
             RawNode("s", ("n1", "cin"), XOR2), RawNode("t2", ("n1", "cin"), AND2),
             RawNode("cout", ("t1", "t2"), OR2)]
    return make_netlist(["a", "b", "cin"], ["s", "cout"], nodes, "full_adder")


def ripple_adder(n: int) -> RawNetlist:
    ins = [f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)] + ["cin"]
    nodes: List[RawNode] = []
    carry = "cin"
    outs = []
    for i in range(n):
        a, b = f"a{i}", f"b{i}"
        nodes.append(RawNode(f"s{i}", (a, b, carry), ("100", "010", "001", "111")))
        nodes.append(RawNode(f"c{i + 1}", (a, b, carry), MAJ3))
        outs.append(f"s{i}")
        carry = f"c{i + 1}"
    outs.append(carry)
    return make_netlist(ins, outs, nodes, f"adder{n}")


def array_multiplier(n: int) -> RawNetlist:
    """Unsigned n x n array multiplier from AND partial products and full adders."""
    ins = [f"x{i}" for i in range(n)] + [f"y{i}" for i in range(n)]
    nodes: List[RawNode] = []
    cols: Dict[int, List[str]] = {}
    for i in range(n):
        for j in range(n):
            p = f"p{i}_{j}"
            nodes.append(RawNode(p, (f"x{i}", f"y{j}"), AND2))
            cols.setdefault(i + j, []).append(p)
    outs = []
    uid = 0
    for w in range(2 * n):
        bits = cols.get(w, [])
        while len(bits) > 1:
            uid += 1
            if len(bits) == 2:
                a, b = bits[:2]
                rest = bits[2:]
                s, c = f"hs{uid}", f"hc{uid}"
                nodes.append(RawNode(s, (a, b), XOR2))
                nodes.append(RawNode(c, (a, b), AND2))
            else:
                a, b, d = bits[:3]
                rest = bits[3:]
                s, c = f"fs{uid}", f"fc{uid}"
                nodes.append(RawNode(s, (a, b, d), ("100", "010", "001", "111")))
                nodes.append(RawNode(c, (a, b, d), MAJ3))
            bits = rest + [s]
            cols.setdefault(w + 1, []).append(c)
        if bits:
            outs.append(bits[0])
    return make_netlist(ins, outs, nodes, f"mult{n}")


def parity(n: int) -> RawNetlist:
    ins = [f"x{i}" for i in range(n)]
    nodes = []
    layer = list(ins)
    uid = 0
    while len(layer) > 1:
        nxt = []
        for i in range(0, len(layer) - 1, 2):
            uid += 1
            nodes.append(RawNode(f"q{uid}", (layer[i], layer[i + 1]), XOR2))
            nxt.append(f"q{uid}")
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return make_netlist(ins, [layer[0]], nodes, f"parity{n}")


def comparator(n: int) -> RawNetlist:
    """a > b and a == b for n-bit unsigned operands, MSB last."""
    ins = [f"a{i}" for i in range(n)] + [f"b{i}" for i in range(n)]
    nodes = []
    gt, eq = None, None
    for i in range(n):
        a, b = f"a{i}", f"b{i}"
        nodes.append(RawNode(f"g{i}", (a, b), ("10",)))
        nodes.append(RawNode(f"e{i}", (a, b), ("00", "11")))
        if gt is None:
            gt, eq = f"g{i}", f"e{i}"
            continue
        # bit i is more significant than everything folded so far
        nodes.append(RawNode(f"gt{i}", (f"g{i}", f"e{i}", gt), ("1--", "-11")))
        nodes.append(RawNode(f"eq{i}", (f"e{i}", eq), AND2))
        gt, eq = f"gt{i}", f"eq{i}"
    return make_netlist(ins, [gt, eq], nodes, f"cmp{n}")


def mux4() -> RawNetlist:
    ins = ["d0", "d1", "d2", "d3", "s0", "s1"]
    cubes = ("1---00", "-1--10", "--1-01", "---111")
    return make_netlist(ins, ["y"], [RawNode("y", tuple(ins), cubes)], "mux4")


def and_chain(n: int = 6) -> RawNetlist:
    """Linear chain of two-input ANDs; depth n-1 before balancing."""
    ins = [f"x{i}" for i in range(n)]
    nodes = []
    acc = ins[0]
    for i in range(1, n):
        out = f"m{i}" if i < n - 1 else "y"
        nodes.append(RawNode(out, (acc, ins[i]), AND2))
        acc = out
    return make_netlist(ins, ["y"], nodes, f"chain{n}")


BENCHMARKS: Dict[str, Callable[[], RawNetlist]] = {
    "c17": c17,
    "full_adder": full_adder_luts,
    "adder4": lambda: ripple_adder(4),
    "adder8": lambda: ripple_adder(8),
    "mult3": lambda: array_multiplier(3),
    "parity8": lambda: parity(8),
    "cmp4": lambda: comparator(4),
    "mux4": mux4,
    "chain6": and_chain,
}
