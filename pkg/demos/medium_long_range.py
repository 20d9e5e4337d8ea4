"""Medium (100 m) and long (1 km) links: the atmosphere takes over.

Both presets use high-gain antennas and the saturated-power model. The TX
noise is attenuated far below kT, and SNR collapses on the absorption lines.
"""

import numpy as np

from thzlink import casestudies
from thzlink.quantities import GHZ

freqs = casestudies.frequency_grid_hz(30.0, 500.0, 5.0)
for preset in ("medium", "long"):
    result = casestudies.frequency_study(preset, freqs)
    thermal = result.column("snr_thermal_only_db")
    base = result.column("snr_baseline_db")
    tx = result.column("snr_baseline_plus_tx_db")
    print(f"\n{preset} ({result.template.distance:g} m)")
    for f_ghz in (30, 60, 140, 185, 240, 325, 400, 500):
        i = int(np.argmin(np.abs(freqs / GHZ - f_ghz)))
        print(f"  {f_ghz:4d} GHz: thermal {thermal[i]:7.1f}  baseline {base[i]:7.1f}  "
              f"+TX {tx[i]:7.1f} dB")
    worst = np.argmax(base - tx)
    print(f"  largest TX penalty {base[worst] - tx[worst]:.2f} dB at {freqs[worst] / GHZ:g} GHz")
