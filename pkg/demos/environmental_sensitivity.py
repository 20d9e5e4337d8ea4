"""The same 1 km link in hot-humid, moderate and cold-dry air.

Dry air opens the windows between water lines; with the atmosphere out of
the way the transmitter noise shows up over a wider band.
"""

import numpy as np

from thzlink import casestudies
from thzlink.quantities import GHZ

freqs = casestudies.frequency_grid_hz(100.0, 500.0, 20.0)
study = casestudies.sensitivity_study(frequencies_hz=freqs, workers=2)

print(f"{'f GHz':>6} " + " ".join(f"{name:>18}" for name in study))
for i, f in enumerate(freqs):
    cells = []
    for result in study.values():
        row = result.rows()[i]
        cells.append(f"{row['snr_baseline_db']:8.1f}/{row['degradation_db']:6.2f} dB")
    print(f"{f / GHZ:6.0f} " + " ".join(f"{c:>18}" for c in cells))

for name, result in study.items():
    penalised = np.sum(result.column("degradation_db") > 1.0)
    print(f"{name:>9}: {penalised} of {len(freqs)} carriers lose more than 1 dB to TX noise")
