"""Ripple-carry, carry-select and BEC1-based carry-select adder generators.

All N-bit builders share one port contract (:class:`AdderPorts`) and wrap
their gates in a block named ``<KIND>_<N>`` so width and kind can be read
back from provenance.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

from .netlist import CellKind, Netlist, NetlistBuilder
from .primitives import build_bec1, build_fa, build_ha, build_mux2


class AdderKind(enum.Enum):
    RCA = "RCA"
    CSA = "CSA"
    CSA_BEC1 = "CSA_BEC1"
    HA_CSA_BEC1 = "HA_CSA_BEC1"

    @classmethod
    def parse(cls, text: str) -> "AdderKind":
        return cls(text.strip().upper().replace("-", "_"))


@dataclass(frozen=True)
class AdderPorts:
    a: tuple[int, ...]
    b: tuple[int, ...]
    cin: int
    sum: tuple[int, ...]
    cout: int


CELL_BLOCK = "HA_CSA_BEC1"
_ADDER_BLOCK = re.compile(r"^(RCA|CSA|CSA_BEC1|HA_CSA_BEC1)_(\d+)$")


def parse_adder_block(segment: str) -> tuple[AdderKind, int] | None:
    """``"CSA_BEC1_4#0"`` -> ``(AdderKind.CSA_BEC1, 4)``; None if not an adder block."""
    m = _ADDER_BLOCK.match(segment.split("#")[0])
    if not m:
        return None
    return AdderKind(m.group(1)), int(m.group(2))


def _check(a, b, width):
    if width < 1:
        raise ValueError("adder width must be at least 1")
    if len(a) != width or len(b) != width:
        raise ValueError(f"operands must have {width} bits")


def build_rca(b: NetlistBuilder, a, bb, cin: int, width: int) -> AdderPorts:
    _check(a, bb, width)
    with b.block(f"RCA_{width}"):
        sums, c = _fa_row(b, a, bb, cin)
    return AdderPorts(tuple(a), tuple(bb), cin, tuple(sums), c)


def _fa_row(b, a, bb, cin):
    sums = []
    c = cin
    for x, y in zip(a, bb):
        s, c = build_fa(b, x, y, c)
        sums.append(s)
    return sums, c


def build_csa(b: NetlistBuilder, a, bb, cin: int, width: int) -> AdderPorts:
    """Single carry-select block: FA rows for carry-in 0 and 1, MUX row on cin."""
    _check(a, bb, width)
    with b.block(f"CSA_{width}"):
        s0, c0 = _fa_row(b, a, bb, b.const(0))
        s1, c1 = _fa_row(b, a, bb, b.const(1))
        sums = [build_mux2(b, x, y, cin) for x, y in zip(s0, s1)]
        cout = build_mux2(b, c0, c1, cin)
    return AdderPorts(tuple(a), tuple(bb), cin, tuple(sums), cout)


def build_csa_bec1(b: NetlistBuilder, a, bb, cin: int, width: int) -> AdderPorts:
    """Carry-select block whose carry-in-1 row is an incrementer on the carry-in-0 row."""
    _check(a, bb, width)
    with b.block(f"CSA_BEC1_{width}"):
        s0, c0 = _fa_row(b, a, bb, b.const(0))
        s1, all_ones = build_bec1(b, s0, width)
        # all-ones sum excludes a carry, so the incremented carry is c0 ^ all_ones
        c1 = b.gate(CellKind.XOR2, c0, all_ones)
        sums = [build_mux2(b, x, y, cin) for x, y in zip(s0, s1)]
        cout = build_mux2(b, c0, c1, cin)
    return AdderPorts(tuple(a), tuple(bb), cin, tuple(sums), cout)


def build_ha_csa_bec1_cell(b: NetlistBuilder, x: int, y: int, cin: int) -> tuple[int, int]:
    """1-bit cell: HA for carry-in 0, 2-bit BEC1 for carry-in 1, MUXes on cin.

    cin=0: (x ^ y, x & y); cin=1: (~(x ^ y), (x & y) ^ (x ^ y)).
    """
    with b.block(CELL_BLOCK):
        s0, c0 = build_ha(b, x, y)
        (s1, c1), never = build_bec1(b, [s0, c0], 2)
        b.discard(never)  # s0 & c0 is identically zero
        s = build_mux2(b, s0, s1, cin)
        c = build_mux2(b, c0, c1, cin)
    return s, c


def build_ha_csa_bec1(b: NetlistBuilder, a, bb, cin: int, width: int) -> AdderPorts:
    _check(a, bb, width)
    with b.block(f"HA_CSA_BEC1_{width}"):
        sums = []
        c = cin
        for x, y in zip(a, bb):
            s, c = build_ha_csa_bec1_cell(b, x, y, c)
            sums.append(s)
    return AdderPorts(tuple(a), tuple(bb), cin, tuple(sums), c)


BUILDERS = {
    AdderKind.RCA: build_rca,
    AdderKind.CSA: build_csa,
    AdderKind.CSA_BEC1: build_csa_bec1,
    AdderKind.HA_CSA_BEC1: build_ha_csa_bec1,
}


def build_adder(b: NetlistBuilder, kind: AdderKind, a, bb, cin: int, width: int) -> AdderPorts:
    return BUILDERS[kind](b, a, bb, cin, width)


def adder_netlist(kind: AdderKind | str, width: int) -> Netlist:
    """Standalone N-bit adder with ports a, b, cin -> sum, cout."""
    if isinstance(kind, str):
        kind = AdderKind.parse(kind)
    if width < 1:
        raise ValueError("adder width must be at least 1")
    b = NetlistBuilder(f"{kind.value.lower()}{width}")
    a = b.input("a", width)
    bb = b.input("b", width)
    (cin,) = b.input("cin")
    ports = build_adder(b, kind, a, bb, cin, width)
    b.output("sum", ports.sum)
    b.output("cout", ports.cout)
    return b.finalize()


def cell_netlist() -> Netlist:
    """The 1-bit HA-CSA-BEC1 cell on its own: a, b, cin -> sum, cout."""
    b = NetlistBuilder("ha_csa_bec1_cell")
    (x,) = b.input("a")
    (y,) = b.input("b")
    (cin,) = b.input("cin")
    s, c = build_ha_csa_bec1_cell(b, x, y, cin)
    b.output("sum", s)
    b.output("cout", c)
    return b.finalize()


def fa_netlist() -> Netlist:
    b = NetlistBuilder("full_adder")
    (x,) = b.input("a")
    (y,) = b.input("b")
    (cin,) = b.input("cin")
    s, c = build_fa(b, x, y, cin)
    b.output("sum", s)
    b.output("cout", c)
    return b.finalize()
