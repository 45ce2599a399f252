"""Named circuit specifications: ``rca:4``, ``cell``, ``mult:8:dadda:classic-fa:rca``."""

from __future__ import annotations

from dataclasses import dataclass

from .adders import AdderKind, adder_netlist, cell_netlist, fa_netlist
from .multiplier import Compressor, MultiplierConfig, Style, build_multiplier
from .netlist import Netlist

MULTIPLIER_NAMES = ("mult", "multiplier")
FIXED = {"cell": cell_netlist, "fa": fa_netlist}


@dataclass(frozen=True)
class CircuitSpec:
    circuit: str
    width: int = 4
    style: Style = Style.FULL_DADDA
    compressor: Compressor = Compressor.HA_CSA_BEC1_CELL
    final_adder: AdderKind = AdderKind.RCA

    @property
    def is_multiplier(self) -> bool:
        return self.circuit == "multiplier"

    def config(self) -> MultiplierConfig:
        return MultiplierConfig(self.width, self.style, self.compressor, self.final_adder)

    def build(self) -> Netlist:
        if self.is_multiplier:
            return build_multiplier(self.config()).netlist
        if self.circuit in FIXED:
            return FIXED[self.circuit]()
        return adder_netlist(AdderKind(self.circuit), self.width)


def normalize_circuit(name: str) -> str:
    t = name.strip().lower().replace("-", "_")
    if t in MULTIPLIER_NAMES:
        return "multiplier"
    if t in FIXED:
        return t
    try:
        return AdderKind.parse(t).value
    except ValueError:
        raise ValueError(f"unknown circuit {name!r}; expected multiplier, cell, fa, "
                         "rca, csa, csa-bec1 or ha-csa-bec1") from None


def make_spec(circuit: str = "multiplier", width: int = 4, style="full_dadda",
              compressor="ha_csa_bec1_cell", final_adder="RCA") -> CircuitSpec:
    c = normalize_circuit(circuit)
    if c in FIXED:
        width = 1
    elif c != "multiplier" and width < 1:
        raise ValueError(f"adder width {width} is below the minimum of 1")
    spec = CircuitSpec(c, width, Style.parse(style) if isinstance(style, str) else style,
                       Compressor.parse(compressor) if isinstance(compressor, str) else compressor,
                       AdderKind.parse(final_adder) if isinstance(final_adder, str) else final_adder)
    if spec.is_multiplier:
        spec.config()  # width check
    return spec


def parse_spec(text: str, width: int = 4) -> CircuitSpec:
    """``kind[:width[:style[:compressor[:final]]]]``; missing fields take defaults."""
    parts = [p for p in text.split(":")]
    if not parts[0] or any(not p for p in parts):
        raise ValueError(f"malformed circuit spec {text!r}")
    if len(parts) > 5:
        raise ValueError(f"circuit spec {text!r} has too many fields")
    kw = {"circuit": parts[0], "width": width}
    if len(parts) > 1:
        try:
            kw["width"] = int(parts[1])
        except ValueError:
            raise ValueError(f"circuit spec {text!r}: width {parts[1]!r} is not an integer") from None
    for key, value in zip(("style", "compressor", "final_adder"), parts[2:]):
        kw[key] = value
    if len(parts) > 2 and normalize_circuit(parts[0]) != "multiplier":
        raise ValueError(f"circuit spec {text!r}: only multipliers take style fields")
    return make_spec(**kw)
