"""The 1-bit HA-CSA-BEC1 cell, gate by gate.

Run: python3 demos/01_cell_walkthrough.py
"""

from fulldadda import analysis
from fulldadda.adders import cell_netlist, fa_netlist

cell = cell_netlist()
fa = fa_netlist()

print("Gates in the cell, with provenance:")
for g in cell.gates:
    print(f"  {g.kind.value:9s} in={list(g.inputs)!s:12s} out={g.output:<3d} {g.block}")

# A half adder computes the cin=0 answer; a two-bit incrementer on (s0, c0)
# gives the cin=1 answer; two multiplexers choose between them.
print("\n a b cin | cell sum cout | full adder")
for v in range(8):
    ins = {"a": v & 1, "b": (v >> 1) & 1, "cin": v >> 2}
    c = analysis.simulate(cell, ins)
    f = analysis.simulate(fa, ins)
    print(f" {ins['a']} {ins['b']}  {ins['cin']}  |    {c['sum']}    {c['cout']}   |   {f['sum']} {f['cout']}")

print("\nverdict:", analysis.verify_exhaustive(cell).summary())

cost = analysis.count_transistors(cell)
print("\nTable-mode cost:")
for row in cost.table_rows:
    print(f"  {row.count} x {row.item:8s} @ {row.unit:>2} = {row.subtotal}")
print(f"  total {cost.table_total}; gate-mode total {cost.gate_total}")

t = analysis.critical_path(cell)
print(f"\nLongest path {t.delay:g} units; cin -> cout {analysis.carry_path(cell):g} unit (one MUX)")
