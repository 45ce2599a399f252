"""Report assembly and rendering (JSON, aligned text, CSV).

Every report is a list of :class:`Section` objects. A section carries flat
rows in the fixed CSV layout and a nested dict for JSON; text output is the
rows laid out in aligned columns.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .analysis import (ActivityReport, CostReport, TimingReport, carry_path, count_transistors,
                       critical_path, random_stimulus, switching_activity, verify)
from .circuits import CircuitSpec
from .multiplier import CensusError, StructuralCensus, census
from .netlist import Netlist
from .primitives import DEFAULTS, Attributes

COLUMNS = ("circuit", "width", "mode", "metric", "value", "paper_target", "delta")
FORMATS = ("json", "text", "csv")


@dataclass(frozen=True)
class Row:
    circuit: str
    width: int
    mode: str
    metric: str
    value: object
    paper_target: object = None
    delta: object = None

    def cells(self) -> list[str]:
        return [fmt(getattr(self, c)) for c in COLUMNS]


@dataclass
class Section:
    title: str
    rows: list[Row] = field(default_factory=list)
    data: dict = field(default_factory=dict)


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return str(int(v)) if v.is_integer() else format(v, ".6g")
    return str(v)


def census_section(name: str, c: StructuralCensus, audit: bool) -> Section:
    """Census counts; formula targets are filled in only when ``audit`` is set."""
    rows = []
    checks = {f.name: f for f in c.formulas()} if audit else {}
    for metric, value in (("HAs", c.ha_count), ("cells", c.fa_or_cell_count), ("MUXes", c.mux_count),
                          ("ANDs", c.and_gate_count), ("CPA width", c.cpa_width)):
        f = checks.get(metric)
        rows.append(Row(name, c.width, "census", metric, value,
                        f.expected if f else None, value - f.expected if f else None))
    data = c.as_dict()
    if audit:
        data["formulas"] = [{"name": f.name, "formula": f.formula, "expected": f.expected,
                             "actual": f.actual, "ok": f.ok} for f in c.formulas()]
    return Section("census", rows, data)


def cost_section(r: CostReport, mode: str) -> Section:
    rows = []
    if r.table_total is not None:
        for cr in r.table_rows:
            rows.append(Row(r.circuit, r.width, "table", cr.item, cr.subtotal))
        rows.append(Row(r.circuit, r.width, "table", "total", r.table_total))
    for cr in r.gate_rows:
        rows.append(Row(r.circuit, r.width, "gate", cr.item, cr.subtotal))
    rows.append(Row(r.circuit, r.width, "gate", "total", r.gate_total))
    for t, d in r.deltas():
        rows.append(Row(r.circuit, r.width, t.mode, f"total vs {t.label}", r.total(t.mode), t.value, d))
    for k, v in sorted(r.figures.items()):
        rows.append(Row(r.circuit, r.width, "table", k, v))
    data = r.as_dict()
    data["mode"] = mode
    return Section("cost", rows, data)


def timing_section(name: str, width: int, t: TimingReport, carry: float | None) -> Section:
    rows = [Row(name, width, "timing", "critical path", t.delay)]
    if carry is not None:
        rows.append(Row(name, width, "timing", "cin->cout", carry))
    data = t.as_dict()
    data["carry_path"] = carry
    return Section("timing", rows, data)


def activity_section(name: str, width: int, a: ActivityReport) -> Section:
    rows = [Row(name, width, "activity", "vectors", a.vectors),
            Row(name, width, "activity", "toggles", a.total_toggles),
            Row(name, width, "activity", "energy proxy", a.energy_proxy)]
    return Section("activity", rows, a.as_dict())


def _is_adder(netlist: Netlist) -> bool:
    return "cin" in netlist.inputs and "cout" in netlist.outputs


def circuit_report(netlist: Netlist, mode: str = "table", attrs: Attributes | None = None,
                   stimulus: dict | None = None) -> list[Section]:
    """Cost and timing sections, plus activity when a stimulus is supplied."""
    attrs = attrs or DEFAULTS
    cost = count_transistors(netlist, mode, attrs)
    t = critical_path(netlist, attrs.delays)
    carry = carry_path(netlist, attrs.delays) if _is_adder(netlist) else None
    sections = [cost_section(cost, mode), timing_section(netlist.name, cost.width, t, carry)]
    if stimulus is not None:
        sections.append(activity_section(netlist.name, cost.width,
                                         switching_activity(netlist, stimulus, attrs)))
    return sections


@dataclass
class Comparison:
    circuit: str
    width: int
    verdict: str
    census: dict | None
    table_cost: float | None
    gate_cost: float
    critical_path: float
    carry_path: float | None
    energy_proxy: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def compare(specs: Sequence[CircuitSpec], n_vectors: int = 10_000, seed: int = 0,
            attrs: Attributes | None = None, samples: int = 100_000,
            allow_mixed_width: bool = False) -> list[Comparison]:
    """One row per spec, in the given order, under one seeded stimulus per port layout."""
    attrs = attrs or DEFAULTS
    if len(specs) < 2:
        raise ValueError("compare needs at least two circuit specs")
    widths = {s.width for s in specs}
    if len(widths) > 1 and not allow_mixed_width:
        raise ValueError(f"circuit widths differ ({sorted(widths)}); pass --allow-mixed-width")
    out = []
    for s in specs:
        n = s.build()
        try:
            cen = census(n).as_dict()
        except CensusError:
            cen = None
        cost = count_transistors(n, "table", attrs)
        act = switching_activity(n, random_stimulus(n, n_vectors, seed), attrs)
        out.append(Comparison(
            n.name, s.width, "PASS" if verify(n, n_samples=samples, seed=seed) else "FAIL", cen,
            cost.table_total, cost.gate_total, critical_path(n, attrs.delays).delay,
            carry_path(n, attrs.delays) if _is_adder(n) else None, act.energy_proxy))
    return out


def comparison_section(rows: list[Comparison]) -> Section:
    flat = []
    for c in rows:
        for metric, mode, value in (("verdict", "verify", c.verdict),
                                    ("total", "table", c.table_cost),
                                    ("total", "gate", c.gate_cost),
                                    ("critical path", "timing", c.critical_path),
                                    ("cin->cout", "timing", c.carry_path),
                                    ("energy proxy", "activity", c.energy_proxy)):
            if value is not None:
                flat.append(Row(c.circuit, c.width, mode, metric, value))
        if c.census:
            for k in ("ha", "cells", "mux", "and", "cpa"):
                flat.append(Row(c.circuit, c.width, "census", k, c.census[k]))
    return Section("comparison", flat, {"circuits": [c.as_dict() for c in rows]})


def render(sections: Sequence[Section], fmt_name: str) -> str:
    if fmt_name == "json":
        return json.dumps({s.title: s.data for s in sections}, indent=2, sort_keys=True) + "\n"
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for s in sections:
            for r in s.rows:
                w.writerow(r.cells())
        return buf.getvalue()
    if fmt_name == "text":
        return "\n".join(_text(s) for s in sections)
    raise ValueError(f"unknown format {fmt_name!r}")


def _text(s: Section) -> str:
    table = [list(COLUMNS)] + [r.cells() for r in s.rows]
    keep = [i for i in range(len(COLUMNS)) if any(row[i] for row in table[1:])]
    table = [[row[i] for i in keep] for row in table]
    widths = [max(len(row[i]) for row in table) for i in range(len(keep))]
    lines = [f"[{s.title}]"]
    for row in table:
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"
