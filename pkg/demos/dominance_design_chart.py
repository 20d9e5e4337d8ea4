"""When does transmitter noise dominate? Threshold algebra and a design chart.

The 1 dB onset corresponds to TX noise at the receiver sitting about 5.87 dB
below the baseline floor. Rearranged, that is a path-loss threshold: links
with less loss than this are TX-noise limited.
"""

import numpy as np

from thzlink import linkbudget, noise
from thzlink.linkbudget import AxisSpec
from thzlink.quantities import GHZ

for delta in noise.TIER_BOUNDARIES_DB:
    tier = noise.classify_tier(delta)
    print(f"{delta:g} dB degradation <- noise ratio {tier.threshold_db:+.2f} dB ({tier.label})")

medium = linkbudget.preset_scenario("medium")
print("\nmedium preset, carrier-level dominance check")
for f_ghz in (60, 140, 240, 300, 400):
    ev = linkbudget.evaluate(medium.replace(carrier_hz=f_ghz * GHZ))
    flag = "TX-dominated" if ev.tx_dominated else "clean"
    print(f"  {f_ghz:3d} GHz: A_PL {ev.path_loss_db:6.1f} dB, threshold "
          f"{ev.threshold_path_loss_db:6.1f} dB, TX/floor {ev.margin_db:+6.2f} dB -> {flag}")

# NF versus path loss, the usual shape for a design chart
grid = linkbudget.parametric_grid(
    AxisSpec("nf_db_override", 5.0, 25.0, 5),
    AxisSpec("total_pathloss_db_override", 0.0, 40.0, 5),
    linkbudget.preset_scenario("short"))
losses = grid.axis2.values()
print("\ndegradation dB, rows NF 5..25 dB, columns path loss " +
      ", ".join(f"{x:g}" for x in losses))
for nf, row in zip(grid.axis1.values(), grid.degradation_db):
    print(f"  NF {nf:4.0f}: " + " ".join(f"{v:8.3f}" for v in row))
print(f"cells at or above 1 dB: {np.sum(grid.degradation_db >= 1.0)} of {grid.degradation_db.size}")
