"""Cell library: truth functions, cost/delay attributes and builder fragments.

Composite blocks (HA, FA, BEC1_k) expand into primitive gates inside a
provenance block of the same name. Two cost views exist: per-gate
("gate" mode) and per-block ("table" mode, using the published block
figures 12/HA, 30/FA, 2/MUX, 8/2-bit BEC1, 30/4-bit BEC1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .netlist import CellKind, NetlistBuilder


def _not(x):
    return np.logical_not(x)


TRUTH: dict[CellKind, Callable] = {
    CellKind.NOT: lambda a: np.logical_not(a),
    CellKind.AND2: lambda a, b: np.logical_and(a, b),
    CellKind.OR2: lambda a, b: np.logical_or(a, b),
    CellKind.NAND2: lambda a, b: _not(np.logical_and(a, b)),
    CellKind.NOR2: lambda a, b: _not(np.logical_or(a, b)),
    CellKind.XOR2: lambda a, b: np.logical_xor(a, b),
    CellKind.XNOR2: lambda a, b: _not(np.logical_xor(a, b)),
    CellKind.MUX2_PTL: lambda d0, d1, s: np.where(s, d1, d0),
    CellKind.TIE0: lambda: np.False_,
    CellKind.TIE1: lambda: np.True_,
}

# Tie cells are supply connections, not transistors, and never switch.
DEFAULT_GATE_COSTS = {
    CellKind.NOT: 2,
    CellKind.NAND2: 4,
    CellKind.NOR2: 4,
    CellKind.AND2: 6,
    CellKind.OR2: 6,
    CellKind.XOR2: 6,
    CellKind.XNOR2: 6,
    CellKind.MUX2_PTL: 2,
    CellKind.TIE0: 0,
    CellKind.TIE1: 0,
}

DEFAULT_DELAYS = {
    CellKind.MUX2_PTL: 1,
    CellKind.NOT: 1,
    CellKind.NAND2: 2,
    CellKind.NOR2: 2,
    CellKind.AND2: 3,
    CellKind.OR2: 3,
    CellKind.XOR2: 3,
    CellKind.XNOR2: 3,
    CellKind.TIE0: 0,
    CellKind.TIE1: 0,
}

DEFAULT_BLOCK_COSTS = {
    "HA": 12,
    "FA": 30,
    "MUX": 2,
    "BEC1_2": 8,
    "BEC1_4": 30,
}


@dataclass(frozen=True)
class CellSpec:
    kind: CellKind
    arity: int
    truth: Callable
    transistor_cost: int
    delay_weight: float


@dataclass
class Attributes:
    """Per-gate transistor costs and delays plus per-block table costs."""

    gate_costs: dict[CellKind, int] = field(default_factory=lambda: dict(DEFAULT_GATE_COSTS))
    delays: dict[CellKind, float] = field(default_factory=lambda: dict(DEFAULT_DELAYS))
    block_costs: dict[str, int] = field(default_factory=lambda: dict(DEFAULT_BLOCK_COSTS))

    def spec(self, kind: CellKind) -> CellSpec:
        return CellSpec(kind, kind.arity, TRUTH[kind], self.gate_costs[kind], self.delays[kind])

    def update(self, table: dict) -> "Attributes":
        """Apply ``{tag: {"transistors": n, "delay": d}}`` overrides.

        Tags naming a primitive (``AND2``, ``MUX2_PTL`` ...) set gate attributes;
        any other tag sets a block table cost (``MUX`` is an alias block for the
        PTL multiplexer).
        """
        for tag, entry in table.items():
            if not isinstance(entry, dict) or not set(entry) <= {"transistors", "delay"}:
                raise ValueError(f"attribute entry {tag!r}: expected {{transistors, delay}}")
            try:
                kind = CellKind(tag)
            except ValueError:
                kind = None
            if kind is not None:
                if "transistors" in entry:
                    self.gate_costs[kind] = _positive(entry["transistors"], tag)
                if "delay" in entry:
                    self.delays[kind] = _positive(entry["delay"], tag)
            else:
                if "delay" in entry:
                    raise ValueError(f"attribute entry {tag!r}: delays apply to primitive cells only")
                if "transistors" in entry:
                    self.block_costs[tag] = _positive(entry["transistors"], tag)
        return self


def _positive(v, tag):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or v <= 0:
        raise ValueError(f"attribute entry {tag!r}: values must be positive numbers")
    return v


DEFAULTS = Attributes()


def load_attributes(path: str | Path, base: Attributes | None = None) -> Attributes:
    """Read a JSON attribute table on top of ``base`` (defaults if omitted)."""
    with open(path) as fh:
        table = json.load(fh)
    if not isinstance(table, dict):
        raise ValueError(f"{path}: expected a JSON object keyed by cell tag or block name")
    attrs = base or Attributes()
    attrs = Attributes(dict(attrs.gate_costs), dict(attrs.delays), dict(attrs.block_costs))
    return attrs.update(table)


def eval_cell(kind: CellKind, inputs) -> int:
    inputs = list(inputs)
    if len(inputs) != kind.arity:
        raise ValueError(f"{kind.value} takes {kind.arity} inputs, got {len(inputs)}")
    return int(TRUTH[kind](*(np.bool_(bool(v)) for v in inputs)))


def build_ha(b: NetlistBuilder, x: int, y: int) -> tuple[int, int]:
    with b.block("HA"):
        s = b.gate(CellKind.XOR2, x, y)
        c = b.gate(CellKind.AND2, x, y)
    return s, c


def build_fa(b: NetlistBuilder, x: int, y: int, cin: int) -> tuple[int, int]:
    with b.block("FA"):
        p = b.gate(CellKind.XOR2, x, y)
        s = b.gate(CellKind.XOR2, p, cin)
        g = b.gate(CellKind.AND2, x, y)
        t = b.gate(CellKind.AND2, p, cin)
        c = b.gate(CellKind.OR2, g, t)
    return s, c


def build_bec1(b: NetlistBuilder, bits: list[int], k: int | None = None) -> tuple[list[int], int]:
    """k-bit incrementer: ``(value + 1) mod 2**k`` and the all-ones carry."""
    if k is None:
        k = len(bits)
    if k < 1:
        raise ValueError("BEC1 width must be at least 1")
    if len(bits) != k:
        raise ValueError(f"BEC1_{k} needs {k} input bits, got {len(bits)}")
    with b.block(f"BEC1_{k}"):
        out = [b.gate(CellKind.NOT, bits[0])]
        run = bits[0]  # AND of bits[0..i-1]
        for i in range(1, k):
            out.append(b.gate(CellKind.XOR2, bits[i], run))
            run = b.gate(CellKind.AND2, run, bits[i])
    return out, run


def build_mux2(b: NetlistBuilder, in0: int, in1: int, sel: int) -> int:
    with b.block("MUX"):
        return b.gate(CellKind.MUX2_PTL, in0, in1, sel)
