from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from fulldadda.adders import (AdderKind, adder_netlist, cell_netlist, fa_netlist,
                              parse_adder_block)
from fulldadda.analysis import simulate, verify_exhaustive
from fulldadda.netlist import CellKind


@pytest.mark.parametrize("kind", list(AdderKind))
@pytest.mark.parametrize("width", [1, 2, 3, 4, 5, 8])
def test_adders_exhaustive(kind, width):
    assert verify_exhaustive(adder_netlist(kind, width), lambda a, b, cin: a + b + cin)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(AdderKind)), st.integers(9, 20), st.data())
def test_adders_random_operands(kind, width, data):
    a = data.draw(st.integers(0, (1 << width) - 1))
    b = data.draw(st.integers(0, (1 << width) - 1))
    cin = data.draw(st.integers(0, 1))
    out = simulate(adder_netlist(kind, width), {"a": a, "b": b, "cin": cin})
    assert out["sum"] | (out["cout"] << width) == a + b + cin


def test_ha_csa_bec1_example():
    out = simulate(adder_netlist("ha-csa-bec1", 4), {"a": 9, "b": 6, "cin": 1})
    assert out == {"sum": 0, "cout": 1}


def _blocks(netlist):
    leaves = {g.block for g in netlist.gates if g.block}
    return Counter(b.rsplit("/", 1)[-1].split("#")[0] for b in leaves)


def test_csa_inventory():
    assert _blocks(adder_netlist("csa", 4)) == {"FA": 8, "MUX": 5}


def test_csa_bec1_inventory():
    n = adder_netlist("csa_bec1", 4)
    assert _blocks(n) == {"FA": 4, "MUX": 5, "BEC1_4": 1, "CSA_BEC1_4": 1}
    glue = [g for g in n.gates if g.block == "CSA_BEC1_4#0"]
    assert [g.kind for g in glue] == [CellKind.XOR2]


def test_ha_csa_bec1_inventory():
    # one HA and one two-bit BEC1 per bit, two MUXes per bit
    assert _blocks(adder_netlist("ha_csa_bec1", 4)) == {"HA": 4, "BEC1_2": 4, "MUX": 8}


def test_cell_prunes_dead_bec_carry():
    n = cell_netlist()
    kinds = Counter(g.kind for g in n.gates)
    assert kinds == {CellKind.XOR2: 2, CellKind.AND2: 1, CellKind.NOT: 1, CellKind.MUX2_PTL: 2}


def test_cell_branches():
    n = cell_netlist()
    for x in (0, 1):
        for y in (0, 1):
            assert simulate(n, {"a": x, "b": y, "cin": 0}) == {"sum": x ^ y, "cout": x & y}
            assert simulate(n, {"a": x, "b": y, "cin": 1}) == {
                "sum": 1 - (x ^ y), "cout": (x & y) ^ (x ^ y)}


def test_cell_matches_full_adder():
    cell, fa = cell_netlist(), fa_netlist()
    for v in range(8):
        ins = {"a": v & 1, "b": (v >> 1) & 1, "cin": v >> 2}
        assert simulate(cell, ins) == simulate(fa, ins)


def test_parse_adder_block():
    assert parse_adder_block("CSA_BEC1_4#0") == (AdderKind.CSA_BEC1, 4)
    assert parse_adder_block("HA_CSA_BEC1_12") == (AdderKind.HA_CSA_BEC1, 12)
    assert parse_adder_block("HA_CSA_BEC1#3") is None
    assert parse_adder_block("FA#0") is None


def test_kind_parse_and_width_check():
    assert AdderKind.parse("ha-csa-bec1") is AdderKind.HA_CSA_BEC1
    with pytest.raises(ValueError):
        AdderKind.parse("cla")
    with pytest.raises(ValueError):
        adder_netlist("rca", 0)
