"""Where does the air eat a sub-THz link?

Tabulates specific attenuation for the three environmental presets and picks
out the oxygen and water-vapour lines that shape everything downstream.
"""

import numpy as np

from thzlink import atmosphere, channel
from thzlink.quantities import GHZ

spectra = {name: atmosphere.absorption_spectrum(30 * GHZ, 500 * GHZ, cond)
           for name, cond in atmosphere.PRESETS.items()}

print("peak specific attenuation, dB/km")
print(f"{'window':>14} " + " ".join(f"{name:>10}" for name in spectra))
for lo, hi in [(50, 70), (110, 125), (175, 190), (310, 335), (370, 390), (440, 460)]:
    cells = []
    for spec in spectra.values():
        f = spec.frequency_hz / GHZ
        sel = (f >= lo) & (f <= hi)
        cells.append(f"{spec.gamma_db_per_km[sel].max():10.2f}")
    print(f"{lo:>6}-{hi:<3} GHz " + " ".join(cells))

# absorption adds on top of spreading loss; compare the two at 1 km
hot = atmosphere.PRESETS["hot"]
for f_ghz in (140.0, 183.31, 240.0, 325.15):
    fspl = channel.fspl_db(1000.0, f_ghz * GHZ)
    a_abs = atmosphere.absorption_db(1000.0, f_ghz * GHZ, hot)
    eps = atmosphere.emissivity(1000.0, f_ghz * GHZ, hot)
    print(f"{f_ghz:7.2f} GHz, 1 km, hot: FSPL {fspl:6.1f} dB, absorption {a_abs:7.1f} dB, "
          f"sky noise temperature {hot.temperature * eps:6.1f} K")

windows = spectra["hot"].gamma_db_per_km < 5.0
print(f"share of 30-500 GHz below 5 dB/km in hot air: {np.mean(windows):.0%}")
