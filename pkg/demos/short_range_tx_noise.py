"""At millimetre distances the transmitter's own noise sets the SNR ceiling.

Runs the short-range preset (0 dBm, isotropic antennas, 75 GHz of bandwidth)
over distance at 300 GHz and prints the degradation grid at four carriers.
"""

from thzlink import casestudies, linkbudget

template = linkbudget.preset_scenario("short")
sweep = linkbudget.sweep_distance(template, [1e-3, 3e-3, 1e-2, 3e-2, 1e-1, 1.0])

print(f"{'distance m':>10} {'thermal':>8} {'baseline':>9} {'+TX':>8} {'loss dB':>8}  tier")
for row in sweep.rows():
    print(f"{row['distance_m']:10.3g} {row['snr_thermal_only_db']:8.2f} "
          f"{row['snr_baseline_db']:9.2f} {row['snr_baseline_plus_tx_db']:8.2f} "
          f"{row['degradation_db']:8.3f}  {row['tier']}")

print("\ndegradation (dB) by carrier")
rows = casestudies.table_v(template)
freqs = casestudies.TABLE_V_FREQUENCIES_GHZ
print(f"{'distance':>9} " + " ".join(f"{f:>8g}" for f in freqs))
for d in casestudies.TABLE_V_DISTANCES_M:
    cells = [r["degradation_db"] for r in rows if r["distance_m"] == d]
    print(f"{d:9.3g} " + " ".join(f"{c:8.4f}" for c in cells))

# Switching to the input-referred convention shows how much the choice matters.
eq2 = linkbudget.evaluate(template.replace(tx_noise_model="paper_eq2"))
print(f"\n300 GHz at 1 mm, paper_eq2 convention: {eq2.degradation_db:.2f} dB")
