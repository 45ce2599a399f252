"""Gate-level generators and auditors for Dadda-style multipliers built from HA-CSA-BEC1 cells."""

from .adders import AdderKind, adder_netlist, cell_netlist, fa_netlist
from .analysis import (count_transistors, critical_path, fault_campaign, simulate, switching_activity,
                       verify_exhaustive, verify_random)
from .multiplier import (Compressor, MultiplierConfig, Style, build_multiplier, census,
                         multiplier_netlist)
from .netlist import CellKind, Gate, Netlist, NetlistBuilder, deserialize, serialize

__all__ = [
    "AdderKind", "CellKind", "Compressor", "Gate", "MultiplierConfig", "Netlist", "NetlistBuilder",
    "Style", "adder_netlist", "build_multiplier", "cell_netlist", "census", "count_transistors",
    "critical_path", "deserialize", "fa_netlist", "fault_campaign", "multiplier_netlist",
    "serialize", "simulate", "switching_activity", "verify_exhaustive", "verify_random",
]
