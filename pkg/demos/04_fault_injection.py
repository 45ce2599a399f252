"""Kind-swap fault injection, and the one kind of fault it cannot see.

Run: python3 demos/04_fault_injection.py
"""

from fulldadda import analysis
from fulldadda.adders import adder_netlist
from fulldadda.multiplier import multiplier_netlist
from fulldadda.netlist import CellKind

for name, net in [("4-bit proposed multiplier", multiplier_netlist(4)),
                  ("8-bit CSA-BEC1 adder", adder_netlist("csa_bec1", 8)),
                  ("6-bit multiplier, CSA final adder", multiplier_netlist(6, final_adder="csa"))]:
    c = analysis.fault_campaign(net, n=100, seed=1)
    print(f"{name}: {c.detected}/{len(c.mutations)} detected, "
          f"{c.equivalent_skipped} locally equivalent swaps redrawn, "
          f"{c.masked_excluded} gates behind tied selects excluded")

# Inside a reduction tree the three cell inputs are not independent. In the
# 4-bit dadda tree one cell receives x = a3&b2 and cin = a3&a2&b1&b2, so
# cin = 1 forces x = 1 and the cin = 1 branch never sees x = y = 0.
net = multiplier_netlist(4, "dadda", "ha_csa_bec1_cell")
i = next(i for i, g in enumerate(net.gates)
         if g.block == "reduce.s2/HA_CSA_BEC1#2/BEC1_2#0" and g.kind is CellKind.XOR2)
for kind in (CellKind.NAND2, CellKind.AND2, CellKind.OR2):
    v = analysis.verify_exhaustive(net, overrides={i: kind})
    print(f"  gate {i} XOR2 -> {kind.value:6s}: {v.summary()}")
