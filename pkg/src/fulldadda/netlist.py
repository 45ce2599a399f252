"""Combinational gate-level netlists.

A :class:`Netlist` is an immutable DAG of primitive gates. Every net has a
single driver (a primary-input bit or one gate output). Multi-bit ports are
LSB-first. Each gate carries a ``block`` provenance path such as
``"reduce.s1/HA_CSA_BEC1#2/MUX#0"`` so block-level accounting survives the
macro expansion of composite cells.
"""

from __future__ import annotations

import contextlib
import enum
import heapq
import json
from dataclasses import dataclass, field


class NetlistError(ValueError):
    """A netlist violates a structural invariant."""


class NetlistParseError(ValueError):
    """A serialized netlist document is malformed."""


class CellKind(enum.Enum):
    NOT = "NOT"
    AND2 = "AND2"
    OR2 = "OR2"
    NAND2 = "NAND2"
    NOR2 = "NOR2"
    XOR2 = "XOR2"
    XNOR2 = "XNOR2"
    MUX2_PTL = "MUX2_PTL"  # inputs: (in0, in1, sel)
    TIE0 = "TIE0"
    TIE1 = "TIE1"

    @property
    def arity(self) -> int:
        return _ARITY[self]


_ARITY = {
    CellKind.NOT: 1,
    CellKind.AND2: 2,
    CellKind.OR2: 2,
    CellKind.NAND2: 2,
    CellKind.NOR2: 2,
    CellKind.XOR2: 2,
    CellKind.XNOR2: 2,
    CellKind.MUX2_PTL: 3,
    CellKind.TIE0: 0,
    CellKind.TIE1: 0,
}


@dataclass(frozen=True)
class Gate:
    kind: CellKind
    inputs: tuple[int, ...]
    output: int
    block: str = ""


@dataclass(frozen=True)
class Netlist:
    name: str
    inputs: dict[str, tuple[int, ...]]
    outputs: dict[str, tuple[int, ...]]
    gates: tuple[Gate, ...]
    net_count: int
    _topo: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def input_width(self, port: str) -> int:
        return len(self.inputs[port])

    def output_width(self, port: str) -> int:
        return len(self.outputs[port])

    @property
    def total_input_bits(self) -> int:
        return sum(len(bits) for bits in self.inputs.values())

    def driver_map(self) -> dict[int, int]:
        """Net id -> index of the gate driving it (primary inputs absent)."""
        return {g.output: i for i, g in enumerate(self.gates)}

    def fanout_map(self) -> dict[int, list[int]]:
        """Net id -> indices of gates reading it."""
        fo: dict[int, list[int]] = {}
        for i, g in enumerate(self.gates):
            for n in g.inputs:
                fo.setdefault(n, []).append(i)
        return fo

    def topo_order(self) -> tuple[int, ...]:
        return self._topo

    def replace_gate(self, index: int, kind: CellKind) -> "Netlist":
        """Copy of this netlist with one gate's kind swapped (same arity)."""
        old = self.gates[index]
        if kind.arity != old.kind.arity:
            raise NetlistError(f"cannot replace {old.kind.value} by {kind.value}: arity differs")
        gates = list(self.gates)
        gates[index] = Gate(kind, old.inputs, old.output, old.block)
        return Netlist(self.name, dict(self.inputs), dict(self.outputs), tuple(gates),
                       self.net_count, self._topo)


def topo_order(netlist: Netlist) -> list[int]:
    """Gate indices such that each gate follows every gate driving its inputs.

    Among simultaneously ready gates the lowest insertion index goes first.
    """
    return list(_kahn(netlist.gates, netlist.net_count))


def _kahn(gates, net_count) -> tuple[int, ...]:
    driver = [-1] * net_count
    for i, g in enumerate(gates):
        driver[g.output] = i
    pending = [0] * len(gates)
    readers: list[list[int]] = [[] for _ in gates]
    for i, g in enumerate(gates):
        for n in g.inputs:
            d = driver[n]
            if d >= 0:
                pending[i] += 1
                readers[d].append(i)
    ready = [i for i, p in enumerate(pending) if p == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for r in readers[i]:
            pending[r] -= 1
            if pending[r] == 0:
                heapq.heappush(ready, r)
    if len(order) != len(gates):
        stuck = sorted(set(range(len(gates))) - set(order))
        raise NetlistError(f"combinational cycle through gates {stuck[:8]}")
    return tuple(order)


class NetlistBuilder:
    """Mutable construction handle; :meth:`finalize` yields a :class:`Netlist`."""

    def __init__(self, name: str):
        self.name = name
        self._inputs: dict[str, list[int]] = {}
        self._outputs: dict[str, list[int]] = {}
        self._gates: list[Gate] = []
        self._net_count = 0
        self._scope: list[str] = []
        self._counters: dict[tuple[str, str], int] = {}
        self._consts: dict[int, int] = {}
        self._discarded: set[int] = set()

    # nets and ports

    def net(self) -> int:
        """Allocate a fresh, not yet driven net."""
        n = self._net_count
        self._net_count += 1
        return n

    def input(self, name: str, width: int = 1) -> list[int]:
        if name in self._inputs or name in self._outputs:
            raise NetlistError(f"duplicate port name {name!r}")
        bits = [self.net() for _ in range(width)]
        self._inputs[name] = bits
        return bits

    def output(self, name: str, nets) -> None:
        if isinstance(nets, int):
            nets = [nets]
        if name in self._inputs or name in self._outputs:
            raise NetlistError(f"duplicate port name {name!r}")
        self._outputs[name] = list(nets)

    def const(self, value: int) -> int:
        """Shared constant net, created lazily via a tie cell."""
        value = int(bool(value))
        if value not in self._consts:
            kind = CellKind.TIE1 if value else CellKind.TIE0
            saved, self._scope = self._scope, []
            try:
                self._consts[value] = self.gate(kind)
            finally:
                self._scope = saved
        return self._consts[value]

    def discard(self, net: int) -> None:
        """Mark a gate output as intentionally unused; finalize prunes it."""
        self._discarded.add(net)

    # gates and provenance

    def gate(self, kind: CellKind, *inputs: int, output: int | None = None) -> int:
        if len(inputs) != kind.arity:
            raise NetlistError(f"{kind.value} takes {kind.arity} inputs, got {len(inputs)}")
        for n in inputs:
            if not 0 <= n < self._net_count:
                raise NetlistError(f"unknown net {n}")
        if output is None:
            output = self.net()
        self._gates.append(Gate(kind, tuple(inputs), output, "/".join(self._scope)))
        return output

    @contextlib.contextmanager
    def block(self, name: str, indexed: bool = True):
        """Tag gates created inside with a provenance segment ``name#k``."""
        seg = name
        if indexed:
            key = ("/".join(self._scope), name)
            k = self._counters.get(key, 0)
            self._counters[key] = k + 1
            seg = f"{name}#{k}"
        self._scope.append(seg)
        try:
            yield seg
        finally:
            self._scope.pop()

    def scope(self, name: str):
        return self.block(name, indexed=False)

    # finalize

    def finalize(self) -> Netlist:
        gates = self._prune(list(self._gates))
        inputs = {k: tuple(v) for k, v in self._inputs.items()}
        outputs = {k: tuple(v) for k, v in self._outputs.items()}
        # renumber densely: inputs first in port order, then gate outputs
        remap: dict[int, int] = {}
        for bits in inputs.values():
            for n in bits:
                remap.setdefault(n, len(remap))
        for g in gates:
            remap.setdefault(g.output, len(remap))
        driven = set(remap)
        for g in gates:
            for n in g.inputs:
                if n not in driven:
                    raise NetlistError(f"net {n} read by {g.kind.value} has no driver")
        for name, bits in outputs.items():
            for n in bits:
                if n not in driven:
                    raise NetlistError(f"output {name!r} bit net {n} has no driver")
        _check_drivers(inputs, gates)
        gates = [Gate(g.kind, tuple(remap[n] for n in g.inputs), remap[g.output], g.block)
                 for g in gates]
        inputs = {k: tuple(remap[n] for n in v) for k, v in inputs.items()}
        outputs = {k: tuple(remap[n] for n in v) for k, v in outputs.items()}
        return make_netlist(self.name, inputs, outputs, gates, len(remap))

    def _prune(self, gates: list[Gate]) -> list[Gate]:
        out_nets = {n for bits in self._outputs.values() for n in bits}
        while True:
            read = {n for g in gates for n in g.inputs} | out_nets
            keep = [g for g in gates if g.output in read or g.output not in self._discarded]
            if len(keep) == len(gates):
                return gates
            # tie cells left unread by pruning are dropped too
            self._discarded |= {g.output for g in keep if g.kind in (CellKind.TIE0, CellKind.TIE1)}
            gates = keep


def _check_drivers(inputs, gates) -> None:
    seen: dict[int, str] = {}
    for name, bits in inputs.items():
        for n in bits:
            if n in seen:
                raise NetlistError(f"net {n} has multiple drivers ({seen[n]}, input {name})")
            seen[n] = f"input {name}"
    for i, g in enumerate(gates):
        if g.output in seen:
            raise NetlistError(
                f"net {g.output} has multiple drivers ({seen[g.output]}, gate {i} {g.kind.value})")
        seen[g.output] = f"gate {i} {g.kind.value}"


def make_netlist(name, inputs, outputs, gates, net_count) -> Netlist:
    """Validate all invariants and return an immutable netlist."""
    gates = tuple(gates)
    for i, g in enumerate(gates):
        if len(g.inputs) != g.kind.arity:
            raise NetlistError(f"gate {i}: {g.kind.value} takes {g.kind.arity} inputs")
    _check_drivers(inputs, gates)
    driven = {n for bits in inputs.values() for n in bits} | {g.output for g in gates}
    if driven != set(range(net_count)):
        missing = sorted(set(range(net_count)) - driven)
        extra = sorted(driven - set(range(net_count)))
        raise NetlistError(f"nets not densely driven: undriven {missing[:8]}, out of range {extra[:8]}")
    for i, g in enumerate(gates):
        for n in g.inputs:
            if not 0 <= n < net_count:
                raise NetlistError(f"gate {i} reads unknown net {n}")
    for port, bits in outputs.items():
        for n in bits:
            if not 0 <= n < net_count:
                raise NetlistError(f"output {port!r} references unknown net {n}")
    topo = _kahn(gates, net_count)

    read = {n for g in gates for n in g.inputs} | {n for bits in outputs.values() for n in bits}
    for i, g in enumerate(gates):
        if g.output not in read:
            raise NetlistError(f"gate {i} ({g.kind.value}, block {g.block!r}) drives a dangling net")

    # every output must depend on some primary input
    pi = {n for bits in inputs.values() for n in bits}
    reach = set(pi)
    for i in topo:
        g = gates[i]
        if any(n in reach for n in g.inputs):
            reach.add(g.output)
    for port, bits in outputs.items():
        for k, n in enumerate(bits):
            if n not in reach:
                raise NetlistError(f"output {port}[{k}] is not reachable from any primary input")
    return Netlist(name, dict(inputs), dict(outputs), gates, net_count, topo)


def new_builder(name: str) -> NetlistBuilder:
    return NetlistBuilder(name)


# serialization

def serialize(netlist: Netlist) -> str:
    """JSON text, one gate per line; byte-stable for equal netlists."""
    def ports(d):
        return [{"name": k, "bits": list(v)} for k, v in d.items()]

    lines = ["{",
             f'  "name": {json.dumps(netlist.name)},',
             f'  "inputs": {json.dumps(ports(netlist.inputs))},',
             f'  "outputs": {json.dumps(ports(netlist.outputs))},',
             '  "gates": [']
    body = [
        "    " + json.dumps({"kind": g.kind.value, "inputs": list(g.inputs),
                             "output": g.output, "block": g.block})
        for g in netlist.gates
    ]
    lines.append(",\n".join(body))
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


_TOP_KEYS = {"name", "inputs", "outputs", "gates"}
_PORT_KEYS = {"name", "bits"}
_GATE_KEYS = {"kind", "inputs", "output", "block"}


def deserialize(text: str) -> Netlist:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise NetlistParseError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict):
        raise NetlistParseError("top level: expected an object")
    _check_keys(doc, _TOP_KEYS, "top level", required=_TOP_KEYS)
    name = doc["name"]
    if not isinstance(name, str):
        raise NetlistParseError("name: expected a string")
    inputs = _parse_ports(doc["inputs"], "inputs")
    outputs = _parse_ports(doc["outputs"], "outputs")
    if not isinstance(doc["gates"], list):
        raise NetlistParseError("gates: expected an array")
    gates = []
    for i, item in enumerate(doc["gates"]):
        where = f"gates[{i}]"
        if not isinstance(item, dict):
            raise NetlistParseError(f"{where}: expected an object")
        _check_keys(item, _GATE_KEYS, where, required={"kind", "inputs", "output"})
        try:
            kind = CellKind(item["kind"])
        except ValueError:
            raise NetlistParseError(f"{where}.kind: unknown cell tag {item['kind']!r}") from None
        ins = item["inputs"]
        if not isinstance(ins, list) or not all(_is_net_id(n) for n in ins):
            raise NetlistParseError(f"{where}.inputs: expected an array of non-negative integers")
        if not _is_net_id(item["output"]):
            raise NetlistParseError(f"{where}.output: expected a non-negative integer")
        block = item.get("block", "")
        if not isinstance(block, str):
            raise NetlistParseError(f"{where}.block: expected a string")
        gates.append(Gate(kind, tuple(ins), item["output"], block))
    used = [n for bits in inputs.values() for n in bits] + [g.output for g in gates]
    net_count = max(used, default=-1) + 1
    return make_netlist(name, inputs, outputs, gates, net_count)


def _is_net_id(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool) and v >= 0


def _check_keys(obj, allowed, where, required=()):
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise NetlistParseError(f"{where}: unknown field {unknown[0]!r}")
    missing = sorted(set(required) - set(obj))
    if missing:
        raise NetlistParseError(f"{where}: missing field {missing[0]!r}")


def _parse_ports(items, where) -> dict[str, tuple[int, ...]]:
    if not isinstance(items, list):
        raise NetlistParseError(f"{where}: expected an array")
    ports = {}
    for i, p in enumerate(items):
        w = f"{where}[{i}]"
        if not isinstance(p, dict):
            raise NetlistParseError(f"{w}: expected an object")
        _check_keys(p, _PORT_KEYS, w, required=_PORT_KEYS)
        if not isinstance(p["name"], str):
            raise NetlistParseError(f"{w}.name: expected a string")
        if p["name"] in ports:
            raise NetlistParseError(f"{w}.name: duplicate port {p['name']!r}")
        if not isinstance(p["bits"], list) or not all(_is_net_id(n) for n in p["bits"]):
            raise NetlistParseError(f"{w}.bits: expected an array of non-negative integers")
        ports[p["name"]] = tuple(p["bits"])
    return ports
