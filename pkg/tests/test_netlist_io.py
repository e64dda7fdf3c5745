import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from magicmap.aig import from_raw, simulate, truth_tables
from magicmap.netlist_io import (NetlistError, RawNode, emit_blif, emit_mapping_report, make_netlist,
                                 parse_aiger_ascii, parse_blif)

FA = """\
.model fa
.inputs a b c
.outputs s co
# sum is odd parity
.names a b c s
100 1
010 1
001 1
111 1
.names a b c \\
  co
11- 1
1-1 1
-11 1
.end
"""


def test_parse_full_adder_blif():
    net = parse_blif(FA)
    assert net.name == "fa"
    assert net.primary_inputs == ("a", "b", "c")
    assert net.primary_outputs == ("s", "co")
    for a, b, c in itertools.product((0, 1), repeat=3):
        total = a + b + c
        assert net.simulate([a, b, c]) == [total & 1, total >> 1]


def test_nodes_are_topologically_sorted():
    text = ".model t\n.inputs a\n.outputs y\n.names x y\n1 1\n.names a x\n0 1\n.end\n"
    net = parse_blif(text)
    assert [n.output for n in net.nodes] == ["x", "y"]
    assert net.simulate([0]) == [1]


def test_constant_nodes():
    text = ".model t\n.inputs a\n.outputs one zero\n.names one\n1\n.names zero\n.end\n"
    net = parse_blif(text)
    assert net.simulate([0]) == [1, 0]


@pytest.mark.parametrize("text,kind", [
    (".model t\n.inputs a\n.outputs q\n.latch a q 0\n.end\n", "unsupported-sequential"),
    (".model t\n.inputs a\n.outputs q\n.subckt foo x=a y=q\n.end\n", "unsupported-hierarchy"),
    (".model t\n.inputs a\n.outputs y\n.names y x\n1 1\n.names x y\n1 1\n.end\n", "combinational-loop"),
    (".model t\n.inputs a\n.outputs y\n.names a y\n1 1\n.names a y\n0 1\n.end\n", "duplicate-output"),
    (".model t\n.inputs a\n.outputs y\n.names b y\n1 1\n.end\n", "undefined-signal"),
    (".model t\n.inputs a\n.outputs z\n.names a y\n1 1\n.end\n", "undefined-signal"),
    (".model t\n.inputs a\n.outputs y\n.names a y\n2 1\n.end\n", "syntax"),
    (".model t\n.inputs a\n.outputs y\n.names a y\n1 0\n.end\n", "syntax"),
    (".model t\n.inputs a\n.outputs y\n.gate and2 a=a y=y\n.end\n", "syntax"),
])
def test_blif_errors(text, kind):
    with pytest.raises(NetlistError) as exc:
        parse_blif(text)
    assert exc.value.kind == kind


def test_error_carries_line_number():
    with pytest.raises(NetlistError) as exc:
        parse_blif(".model t\n.inputs a\n.outputs y\n.names a y\n11 1\n.end\n")
    assert exc.value.line == 5


def test_blif_roundtrip_preserves_function():
    net = parse_blif(FA)
    again = parse_blif(emit_blif(net))
    assert again.primary_inputs == net.primary_inputs
    for pat in itertools.product((0, 1), repeat=3):
        assert again.simulate(pat) == net.simulate(pat)


@st.composite
def raw_netlists(draw):
    n_in = draw(st.integers(1, 4))
    names = [f"i{j}" for j in range(n_in)]
    nodes = []
    for j in range(draw(st.integers(1, 6))):
        fan = draw(st.lists(st.sampled_from(names), min_size=1, max_size=3, unique=True))
        cubes = draw(st.lists(st.text("01-", min_size=len(fan), max_size=len(fan)), max_size=4))
        out = f"n{j}"
        nodes.append(RawNode(out, tuple(fan), tuple(cubes)))
        names.append(out)
    outs = draw(st.lists(st.sampled_from(names[n_in:]), min_size=1, max_size=3, unique=True))
    return make_netlist([f"i{j}" for j in range(n_in)], outs, nodes)


@settings(max_examples=60, deadline=None)
@given(raw_netlists())
def test_emit_parse_roundtrip_property(net):
    again = parse_blif(emit_blif(net))
    n = len(net.primary_inputs)
    for pat in itertools.product((0, 1), repeat=n):
        assert again.simulate(pat) == net.simulate(pat)


@settings(max_examples=60, deadline=None)
@given(raw_netlists())
def test_aig_conversion_matches_raw_simulation(net):
    aig = from_raw(net)
    for pat in itertools.product((0, 1), repeat=len(net.primary_inputs)):
        assert simulate(aig, pat) == net.simulate(pat)


AAG_HALF_ADDER = """\
aag 7 2 0 2 3
2
4
6
12
6 13 15
12 2 4
14 3 5
i0 x
i1 y
o0 s
o1 c
"""


def test_parse_aiger_half_adder():
    aig = parse_aiger_ascii(AAG_HALF_ADDER)
    assert aig.pi_names == ("x", "y")
    assert aig.po_names == ("s", "c")
    for x, y in itertools.product((0, 1), repeat=2):
        assert simulate(aig, [x, y]) == [x ^ y, x & y]


@pytest.mark.parametrize("text,kind", [
    ("aag 1 0 1 0 0\n2 3\n", "unsupported-sequential"),
    ("aig 0 0 0 0 0\n", "syntax"),
    ("aag 1 1 0 1 0\n2\n9\n", "bad-literal"),
    ("aag 2 1 0 1 1\n2\n4\n4 4 2\n", "combinational-loop"),
])
def test_aiger_errors(text, kind):
    with pytest.raises(NetlistError) as exc:
        parse_aiger_ascii(text)
    assert exc.value.kind == kind


def test_aiger_and_blif_agree():
    blif = ".model h\n.inputs x y\n.outputs s c\n.names x y s\n10 1\n01 1\n.names x y c\n11 1\n.end\n"
    assert truth_tables(from_raw(parse_blif(blif))) == truth_tables(parse_aiger_ascii(AAG_HALF_ADDER))


def test_mapping_report_is_json_and_deterministic():
    from magicmap.benchgen import full_adder_luts
    from magicmap.lut_mapper import luts_from_raw
    from magicmap.pipeline import FlowConfig, compile_luts

    raw = full_adder_luts()
    res = compile_luts(luts_from_raw(raw), from_raw(raw), FlowConfig(grid=(64, 64)))
    a = emit_mapping_report(res, "fa")
    b = emit_mapping_report(compile_luts(luts_from_raw(raw), from_raw(raw), FlowConfig(grid=(64, 64))), "fa")
    assert a == b
    doc = json.loads(a)
    assert doc["stats"] == {"cycles": res.stats.cycles, "mems": res.stats.mems}
    assert len(doc["schedule"]) == res.stats.cycles
    assert doc["verification"]["passed"] is True
