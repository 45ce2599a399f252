"""Reduction schedules and block counts of the generated multipliers.

Run: python3 demos/03_multiplier_census.py
"""

from fulldadda import analysis
from fulldadda.multiplier import Compressor, MultiplierConfig, Style, build_multiplier

for style in Style:
    r = build_multiplier(MultiplierConfig(4, style))
    print(f"4-bit {style.value}: initial heights {r.schedule.initial_heights}")
    for k, st in enumerate(r.schedule.stages, 1):
        print(f"  stage {k} target {st.target}: HA {st.count('HA')}, cells {st.count('HA_CSA_BEC1')}"
              f" -> heights {st.heights}")

print("\nProposed configuration, N = 4..12")
print("   N   HA  cells  MUX  AND  CPA   formula CPA")
for n in range(4, 13):
    c = build_multiplier(MultiplierConfig(n)).census
    print(f"  {n:2d} {c.ha_count:4d} {c.fa_or_cell_count:6d} {c.mux_count:4d} {c.and_gate_count:4d}"
          f" {c.cpa_width:4d}   {2 * (n - 2):4d}")

# Bit bookkeeping: N^2 partial products, each 3:2 cell removes one bit, so
# (N-1)(N-3) cells leave 4N-3 bits. A w-column CPA takes at most 2w of them,
# every other column except the carry-out one holds a single bit, so
# 4N-3 <= 2w + (2N-w-1), i.e. w >= 2N-2.
n = 4
left = n * n - (n - 1) * (n - 3)
w = 2 * (n - 2)
print(f"\nN={n}: {n * n} PP bits - {(n - 1) * (n - 3)} cells = {left} bits; "
      f"a {w}-column CPA fits at most {2 * w + (2 * n - w - 1)}")

m = build_multiplier(MultiplierConfig(4)).netlist
cost = analysis.count_transistors(m)
print("\n4-bit proposed multiplier, table mode:")
for row in cost.table_rows:
    print(f"  {row.count:2d} x {row.item:12s} = {row.subtotal}")
(t, d), = cost.deltas()
print(f"  total {cost.table_total:g}; published {t.value}; delta {d:+g}")

print("\n8-bit check:", analysis.verify_exhaustive(
    build_multiplier(MultiplierConfig(8, Style.DADDA, Compressor.CLASSIC_FA)).netlist).summary())
