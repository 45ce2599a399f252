"""Unsigned N x N multipliers with Dadda-style partial-product reduction.

Pipeline: AND-array partial products -> staged column compression toward
the Dadda height sequence 2, 3, 4, 6, 9, ... -> one carry-propagate adder.
Compression cells are either classic full adders or the HA-CSA-BEC1 cell;
half adders are used where a column only needs one bit removed.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .adders import CELL_BLOCK, AdderKind, build_adder, build_ha_csa_bec1_cell, parse_adder_block
from .netlist import CellKind, Netlist, NetlistBuilder
from .primitives import build_fa, build_ha


class ScheduleError(RuntimeError):
    """The reduction scheduler could not meet a stage target."""


class CensusError(ValueError):
    pass


class Style(enum.Enum):
    DADDA = "dadda"
    FULL_DADDA = "full_dadda"

    @classmethod
    def parse(cls, text: str) -> "Style":
        return cls(text.strip().lower().replace("-", "_"))


class Compressor(enum.Enum):
    CLASSIC_FA = "classic_fa"
    HA_CSA_BEC1_CELL = "ha_csa_bec1_cell"

    @classmethod
    def parse(cls, text: str) -> "Compressor":
        t = text.strip().lower().replace("-", "_")
        if t == "ha_csa_bec1":
            t = "ha_csa_bec1_cell"
        return cls(t)

    @property
    def block(self) -> str:
        return "FA" if self is Compressor.CLASSIC_FA else CELL_BLOCK


@dataclass(frozen=True)
class MultiplierConfig:
    width: int
    style: Style = Style.FULL_DADDA
    compressor: Compressor = Compressor.HA_CSA_BEC1_CELL
    final_adder: AdderKind = AdderKind.RCA

    def __post_init__(self):
        if self.width < 2:
            raise ValueError(f"multiplier width {self.width} is below the minimum of 2")

    @property
    def is_proposed(self) -> bool:
        return (self.style is Style.FULL_DADDA and self.compressor is Compressor.HA_CSA_BEC1_CELL
                and self.final_adder is AdderKind.RCA)

    @property
    def label(self) -> str:
        return f"mult{self.width}_{self.style.value}_{self.compressor.value}_{self.final_adder.value.lower()}"


PROPOSED = dict(style=Style.FULL_DADDA, compressor=Compressor.HA_CSA_BEC1_CELL,
                final_adder=AdderKind.RCA)


@dataclass
class PPMatrix:
    """Column-indexed nets; column w carries weight 2**w."""

    columns: list[list[int]]

    @property
    def heights(self) -> list[int]:
        return [len(c) for c in self.columns]

    @property
    def max_height(self) -> int:
        return max(self.heights, default=0)


@dataclass(frozen=True)
class Placement:
    column: int
    cell: str
    consumed: tuple[int, ...]
    produced: tuple[int, int]


@dataclass
class Stage:
    target: int
    placements: list[Placement] = field(default_factory=list)
    heights: list[int] = field(default_factory=list)

    def count(self, cell: str) -> int:
        return sum(p.cell == cell for p in self.placements)


@dataclass
class ReductionSchedule:
    initial_heights: list[int]
    stages: list[Stage]

    def count(self, cell: str) -> int:
        return sum(s.count(cell) for s in self.stages)


def dadda_heights(n_layers: int) -> list[int]:
    """Stage targets for a matrix of the given height, largest first."""
    seq = [2]
    while seq[-1] * 3 // 2 < n_layers:
        seq.append(seq[-1] * 3 // 2)
    return [d for d in reversed(seq) if d < n_layers]


def generate_pps(b: NetlistBuilder, a, bb) -> PPMatrix:
    n = len(a)
    cols: list[list[int]] = [[] for _ in range(2 * n)]
    with b.scope("pp"):
        for j, y in enumerate(bb):
            for i, x in enumerate(a):
                cols[i + j].append(b.gate(CellKind.AND2, x, y))
    return PPMatrix(cols)


def schedule_reduction(b: NetlistBuilder, matrix: PPMatrix, style: Style,
                       compressor: Compressor) -> tuple[PPMatrix, ReductionSchedule]:
    """Compress ``matrix`` to height 2, emitting cells into ``b``.

    Columns are visited LSB first; carries land in the next column's output
    for the same stage and count against its target. Within a column the
    oldest nets are consumed first. ``dadda`` removes exactly the excess
    (FA per 2 bits, HA for an odd one). ``full_dadda`` covers an odd excess
    with a full cell instead of a half adder in every stage but the last.
    """
    targets = dadda_heights(matrix.max_height)
    schedule = ReductionSchedule(matrix.heights, [])
    cols = [list(c) for c in matrix.columns]
    for j, d in enumerate(targets, start=1):
        last = j == len(targets)
        stage = Stage(d)
        fresh: list[list[int]] = [[] for _ in range(len(cols) + 1)]
        rest: list[list[int]] = [[] for _ in range(len(cols))]
        with b.scope(f"reduce.s{j}"):
            for c in range(len(cols)):
                pending = deque(cols[c])
                excess = len(pending) + len(fresh[c]) - d
                while excess > 0:
                    full = excess >= 2 or (style is Style.FULL_DADDA and not last and len(pending) >= 3)
                    need = 3 if full else 2
                    if len(pending) < need:
                        raise ScheduleError(_dump(j, d, c, cols, fresh))
                    ins = tuple(pending.popleft() for _ in range(need))
                    if full and compressor is Compressor.CLASSIC_FA:
                        s, cy = build_fa(b, *ins)
                    elif full:
                        s, cy = build_ha_csa_bec1_cell(b, *ins)
                    else:
                        s, cy = build_ha(b, *ins)
                    cell = compressor.block if full else "HA"
                    stage.placements.append(Placement(c, cell, ins, (s, cy)))
                    fresh[c].append(s)
                    fresh[c + 1].append(cy)
                    excess -= 2 if full else 1
                rest[c] = list(pending)
        if fresh[len(cols)]:
            raise ScheduleError(f"stage {j}: carry out of the top column")
        cols = [rest[c] + fresh[c] for c in range(len(cols))]
        stage.heights = [len(c) for c in cols]
        if max(stage.heights) > d:
            raise ScheduleError(_dump(j, d, -1, cols, fresh))
        schedule.stages.append(stage)
    return PPMatrix(cols), schedule


def _dump(j, d, c, cols, fresh):
    heights = [len(x) for x in cols]
    return f"stage {j} (target {d}) unreachable at column {c}; heights {heights}, " \
           f"carries so far {[len(x) for x in fresh]}"


@dataclass
class MultiplierResult:
    netlist: Netlist
    census: "StructuralCensus"
    schedule: ReductionSchedule
    config: MultiplierConfig


def build_multiplier(config: MultiplierConfig) -> MultiplierResult:
    n = config.width
    b = NetlistBuilder(config.label)
    a = b.input("a", n)
    bb = b.input("b", n)
    matrix = generate_pps(b, a, bb)
    final, schedule = schedule_reduction(b, matrix, config.style, config.compressor)
    product = _final_adder(b, final, config.final_adder)
    b.output("p", product)
    netlist = b.finalize()
    return MultiplierResult(netlist, census(netlist), schedule, config)


def _final_adder(b: NetlistBuilder, m: PPMatrix, kind: AdderKind) -> list[int]:
    heights = m.heights
    width = len(heights)
    twos = [c for c, h in enumerate(heights) if h == 2]
    used = [c for c, h in enumerate(heights) if h > 0]
    product: list[int] = []
    lo = twos[0] if twos else width
    hi = used[-1]
    for c in range(min(lo, width)):
        product.append(m.columns[c][0] if heights[c] else b.const(0))
    if lo == width:
        return product
    if hi + 1 >= width:
        raise ScheduleError("final rows reach the top column; no room for the carry out")
    zero = b.const(0)
    row_a = [m.columns[c][0] if heights[c] else zero for c in range(lo, hi + 1)]
    row_b = [m.columns[c][1] if heights[c] == 2 else zero for c in range(lo, hi + 1)]
    with b.scope("cpa"):
        ports = build_adder(b, kind, row_a, row_b, zero, hi - lo + 1)
    product.extend(ports.sum)
    product.append(ports.cout)
    product.extend(b.const(0) for _ in range(hi + 2, width))
    return product


@dataclass(frozen=True)
class FormulaCheck:
    name: str
    formula: str
    expected: int
    actual: int

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class StructuralCensus:
    width: int
    ha_count: int
    fa_or_cell_count: int
    mux_count: int
    and_gate_count: int
    cpa_width: int
    compressor: str | None = None
    cpa_kind: str | None = None
    stages: list[tuple[int, int]] = field(default_factory=list)

    def formulas(self) -> list[FormulaCheck]:
        n = self.width
        checks = [
            FormulaCheck("HAs", "N-1", n - 1, self.ha_count),
            FormulaCheck("cells", "(N-1)(N-3)", (n - 1) * (n - 3), self.fa_or_cell_count),
            FormulaCheck("MUXes", "2(N-1)(N-3)", 2 * (n - 1) * (n - 3), self.mux_count),
            FormulaCheck("ANDs", "N^2", n * n, self.and_gate_count),
            FormulaCheck("CPA width", "2(N-2)", 2 * (n - 2), self.cpa_width),
        ]
        return checks

    def as_dict(self) -> dict:
        return {
            "width": self.width,
            "ha": self.ha_count,
            "cells": self.fa_or_cell_count,
            "mux": self.mux_count,
            "and": self.and_gate_count,
            "cpa": self.cpa_width,
            "compressor": self.compressor,
            "cpa_kind": self.cpa_kind,
            "stages": [{"ha": h, "cells": c} for h, c in self.stages],
        }


def census(netlist: Netlist) -> StructuralCensus:
    """Block counts of a generated multiplier, read back from provenance."""
    segs = [g.block.split("/") for g in netlist.gates]
    if not any(s[0] == "pp" for s in segs) or "a" not in netlist.inputs:
        raise CensusError(f"{netlist.name!r} carries no multiplier provenance")
    n = len(netlist.inputs["a"])
    ands = sum(1 for g, s in zip(netlist.gates, segs) if s[0] == "pp" and g.kind is CellKind.AND2)
    muxes = sum(1 for g in netlist.gates if g.kind is CellKind.MUX2_PTL)
    instances: dict[str, set[str]] = {}
    stage_counts: dict[int, list[int]] = {}
    cells_kind = None
    cpa_kind, cpa_width = None, 0
    for s in segs:
        if s[0].startswith("reduce.s") and len(s) > 1:
            kind = s[1].split("#")[0]
            instances.setdefault(kind, set()).add("/".join(s[:2]))
            counts = stage_counts.setdefault(int(s[0][len("reduce.s"):]), [set(), set()])
            counts[0 if kind == "HA" else 1].add(s[1])
            if kind != "HA":
                cells_kind = kind
        elif s[0] == "cpa" and len(s) > 1 and cpa_kind is None:
            parsed = parse_adder_block(s[1])
            if parsed:
                cpa_kind, cpa_width = parsed[0].value, parsed[1]
    cells = len(instances.get("FA", ())) + len(instances.get(CELL_BLOCK, ()))
    stages = [(len(stage_counts[k][0]), len(stage_counts[k][1])) for k in sorted(stage_counts)]
    return StructuralCensus(n, len(instances.get("HA", ())), cells, muxes, ands, cpa_width,
                            cells_kind, cpa_kind, stages)


def multiplier_netlist(width: int, style="full_dadda", compressor="ha_csa_bec1_cell",
                       final_adder="RCA") -> Netlist:
    cfg = MultiplierConfig(
        width,
        style if isinstance(style, Style) else Style.parse(style),
        compressor if isinstance(compressor, Compressor) else Compressor.parse(compressor),
        final_adder if isinstance(final_adder, AdderKind) else AdderKind.parse(final_adder),
    )
    return build_multiplier(cfg).netlist
