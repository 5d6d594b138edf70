"""
Ideal sampler against its closed form
=====================================

An ideal sampler multiplies the detected probe by the normalized pulse
transmission. For Gaussian pulses and a sinusoidal probe every tone is known
in closed form, so this is the first thing to check on a new grid.
"""

from soamix.harness.oracle import compare_spectra, ideal_sampler_oracle, linearized_spectrum
from soamix.pipeline import Bench

bench = Bench()
print(f"grid: {bench.grid.n_samples} samples over {bench.grid.window * 1e9:.1f} ns, dt = {bench.grid.dt * 1e15:.2f} fs")

# 1 mW mean probe at depth 0.8, 1.3 ps pulses at 10 GHz
sim = linearized_spectrum(bench, 0.8, 1e-3)
ref = ideal_sampler_oracle(bench.pulse_fwhm, 10e9, 1e9, 0.8, 1e-3, bench.photodiode, bench.grid)

for f in (1e9, 9e9, 10e9, 11e9, 19e9, 20e9, 21e9):
    print(f"{f / 1e9:5.0f} GHz   simulated {sim.power_at(f):8.3f} dBm   closed form {ref.power_at(f):8.3f} dBm")

err, freq, _, _ = compare_spectra(sim, ref)
print(f"worst bin above -120 dBm: {err:.2e} dB at {freq / 1e9:.0f} GHz")
