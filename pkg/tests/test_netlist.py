import json

import pytest
from hypothesis import given, settings, strategies as st

from fulldadda.adders import adder_netlist, cell_netlist
from fulldadda.multiplier import multiplier_netlist
from fulldadda.netlist import (CellKind, Gate, NetlistBuilder, NetlistError, NetlistParseError,
                               deserialize, make_netlist, serialize, topo_order)


def small():
    b = NetlistBuilder("small")
    x, y = b.input("x", 2)
    with b.block("HA"):
        s = b.gate(CellKind.XOR2, x, y)
        c = b.gate(CellKind.AND2, x, y)
    b.output("s", s)
    b.output("c", c)
    return b.finalize()


def test_builder_ports_and_provenance():
    n = small()
    assert n.inputs == {"x": (0, 1)}
    assert n.outputs == {"s": (2,), "c": (3,)}
    assert [g.block for g in n.gates] == ["HA#0", "HA#0"]
    assert n.total_input_bits == 2


def test_block_counters_are_per_parent():
    b = NetlistBuilder("t")
    (x,) = b.input("x")
    outs = []
    with b.scope("top"):
        for _ in range(2):
            with b.block("FA"):
                with b.block("MUX"):
                    outs.append(b.gate(CellKind.NOT, x))
    b.output("o", outs)
    n = b.finalize()
    assert [g.block for g in n.gates] == ["top/FA#0/MUX#0", "top/FA#1/MUX#0"]


def test_constants_are_shared_and_unscoped():
    b = NetlistBuilder("t")
    (x,) = b.input("x")
    with b.block("B"):
        z1, z2 = b.const(0), b.const(0)
        o = b.gate(CellKind.OR2, x, z1)
    assert z1 == z2
    b.output("o", o)
    n = b.finalize()
    ties = [g for g in n.gates if g.kind is CellKind.TIE0]
    assert len(ties) == 1 and ties[0].block == ""


def test_discarded_output_is_pruned():
    b = NetlistBuilder("t")
    x, y = b.input("x", 2)
    dead = b.gate(CellKind.AND2, x, y)
    b.discard(dead)
    b.output("o", b.gate(CellKind.XOR2, x, y))
    n = b.finalize()
    assert [g.kind for g in n.gates] == [CellKind.XOR2]
    assert n.net_count == 3


def test_dangling_gate_rejected():
    b = NetlistBuilder("t")
    x, y = b.input("x", 2)
    b.gate(CellKind.AND2, x, y)
    b.output("o", b.gate(CellKind.XOR2, x, y))
    with pytest.raises(NetlistError, match="dangling"):
        b.finalize()


def test_undriven_net_rejected():
    b = NetlistBuilder("t")
    (x,) = b.input("x")
    floating = b.net()
    b.output("o", b.gate(CellKind.AND2, x, floating))
    with pytest.raises(NetlistError, match="no driver"):
        b.finalize()


def test_multiple_drivers_rejected():
    b = NetlistBuilder("t")
    (x,) = b.input("x")
    o = b.gate(CellKind.NOT, x)
    b.gate(CellKind.NOT, x, output=o)
    b.output("o", o)
    with pytest.raises(NetlistError, match="multiple drivers"):
        b.finalize()


def test_cycle_rejected():
    b = NetlistBuilder("t")
    (x,) = b.input("x")
    loop = b.net()
    o = b.gate(CellKind.AND2, x, loop)
    b.gate(CellKind.NOT, o, output=loop)
    b.output("o", o)
    with pytest.raises(NetlistError, match="cycle"):
        b.finalize()


def test_unreachable_output_rejected():
    b = NetlistBuilder("t")
    b.input("x")
    b.output("o", b.const(1))
    with pytest.raises(NetlistError, match="not reachable"):
        b.finalize()


def test_wrong_arity_rejected():
    b = NetlistBuilder("t")
    (x,) = b.input("x")
    with pytest.raises(NetlistError, match="takes 2 inputs"):
        b.gate(CellKind.AND2, x)
    with pytest.raises(NetlistError):
        make_netlist("t", {"x": (0,)}, {"o": (1,)}, [Gate(CellKind.NOT, (0, 0), 1)], 2)


def test_topo_order_respects_dependencies():
    n = multiplier_netlist(5)
    pos = {i: k for k, i in enumerate(topo_order(n))}
    drv = n.driver_map()
    for i, g in enumerate(n.gates):
        for net in g.inputs:
            if net in drv:
                assert pos[drv[net]] < pos[i]


def test_replace_gate_keeps_arity():
    n = small()
    m = n.replace_gate(0, CellKind.XNOR2)
    assert m.gates[0].kind is CellKind.XNOR2 and n.gates[0].kind is CellKind.XOR2
    with pytest.raises(NetlistError, match="arity"):
        n.replace_gate(0, CellKind.NOT)


@pytest.mark.parametrize("make", [small, cell_netlist, lambda: adder_netlist("csa_bec1", 4),
                                  lambda: multiplier_netlist(4)])
def test_serialize_roundtrip_is_byte_stable(make):
    n = make()
    text = serialize(n)
    back = deserialize(text)
    assert back == n
    assert serialize(back) == text
    assert text.count("\n") == len(n.gates) + 7  # one gate per line


def test_deserialize_reports_field_path():
    doc = json.loads(serialize(small()))
    doc["gates"][1]["kind"] = "FOO"
    with pytest.raises(NetlistParseError, match=r"gates\[1\]\.kind: unknown cell tag 'FOO'"):
        deserialize(json.dumps(doc))


def test_deserialize_rejects_unknown_field():
    doc = json.loads(serialize(small()))
    doc["gates"][0]["delay"] = 3
    with pytest.raises(NetlistParseError, match=r"gates\[0\]: unknown field 'delay'"):
        deserialize(json.dumps(doc))


def test_deserialize_reports_line_of_syntax_error():
    text = serialize(small()).replace('"kind"', "kind", 1)
    with pytest.raises(NetlistParseError, match="line 6"):
        deserialize(text)


def test_deserialize_validates_structure():
    doc = json.loads(serialize(small()))
    doc["gates"][1]["output"] = doc["gates"][0]["output"]
    with pytest.raises(NetlistError):
        deserialize(json.dumps(doc))


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.sampled_from(["dadda", "full_dadda"]),
       st.sampled_from(["classic_fa", "ha_csa_bec1_cell"]))
def test_generated_multipliers_roundtrip(n, style, comp):
    net = multiplier_netlist(n, style, comp)
    assert deserialize(serialize(net)) == net
