"""Cascaded transmitter noise figure for the CMOS and SiGe chains.

Each chain is a mixer with its IF load followed by a power amplifier. The
Friis cascade is evaluated across 30-500 GHz together with the chain gain
and the saturated-power trend of each technology.
"""

from thzlink import txchain
from thzlink.quantities import GHZ, K_B

print(f"{'f GHz':>6} {'CMOS NF':>8} {'SiGe NF':>8} {'CMOS G':>7} {'SiGe G':>7} "
      f"{'CMOS Psat':>9} {'SiGe Psat':>9}")
profiles = [txchain.get_technology("cmos"), txchain.get_technology("sige")]
for f_ghz in (30, 65, 100, 150, 200, 300, 350, 400, 500):
    f = f_ghz * GHZ
    nf = [txchain.cascaded_tx_noise_figure(p, f) for p in profiles]
    g = [txchain.chain_gain(p, f) for p in profiles]
    ps = [txchain.tx_saturated_power_dbm(p, f) for p in profiles]
    print(f"{f_ghz:6d} {nf[0]:8.2f} {nf[1]:8.2f} {g[0]:7.1f} {g[1]:7.1f} {ps[0]:9.2f} {ps[1]:9.2f}")

# The PA barely matters in the cascade: the mixer sets the noise figure.
cmos = profiles[0]
mixer, pa = txchain.stage_params(cmos, 300 * GHZ)
print(f"\nCMOS at 300 GHz: mixer F = {mixer.noise_factor:.1f}, "
      f"PA term (F-1)/G1 = {(pa.noise_factor - 1) / mixer.gain:.1f}")

# The two TX noise conventions differ by exactly the chain gain.
t = 308.15
for model in txchain.TX_NOISE_MODELS:
    psd = txchain.tx_noise_psd(cmos, 300 * GHZ, t, model)
    print(f"{model:>16}: {psd:.3e} W/Hz ({psd / (K_B * t):.1f} x kT)")
