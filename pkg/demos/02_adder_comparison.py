"""Four adder families side by side: cost, carry path and switching activity.

Run: python3 demos/02_adder_comparison.py
"""

from fulldadda import analysis
from fulldadda.adders import AdderKind, adder_netlist

print("4-bit adders, table-mode transistor counts and published targets")
for kind in AdderKind:
    r = analysis.count_transistors(adder_netlist(kind, 4))
    targets = ", ".join(f"{t.label} {t.value} (delta {d:+g})" for t, d in r.deltas()) or "-"
    print(f"  {kind.value:12s} table {r.table_total:>4g}  gate {r.gate_total:>4g}  targets: {targets}")

# The single-block carry-select designs hide their ripple behind a single
# output MUX, so cin -> cout is one unit; the cell chain pays one MUX per bit.
print("\ncin -> cout path (MUX = 1 unit)")
print("   N " + "".join(f"{k.value:>13s}" for k in AdderKind))
for n in (1, 2, 4, 8, 16):
    row = [analysis.carry_path(adder_netlist(k, n)) for k in AdderKind]
    print(f"  {n:2d} " + "".join(f"{d:13g}" for d in row))

print("\nLongest input-to-output path")
for n in (4, 8, 16):
    row = [analysis.critical_path(adder_netlist(k, n)).delay for k in AdderKind]
    print(f"  {n:2d} " + "".join(f"{d:13g}" for d in row))

stim = analysis.random_stimulus(adder_netlist("rca", 4), 10_000, seed=0)
print("\nEnergy proxy over 10^4 seeded random vectors (toggles x transistor cost)")
for kind in AdderKind:
    a = analysis.switching_activity(adder_netlist(kind, 4), stim)
    print(f"  {kind.value:12s} toggles {a.total_toggles:7d}  proxy {a.energy_proxy:10g}")
