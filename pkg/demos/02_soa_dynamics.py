"""
Gain and phase of one SOA under a pulse train
=============================================

The lumped SOA model has a single state, the integrated log-gain h(t).
Here a 10 GHz pulse train saturates the amplifier and a weak CW probe rides
along; the probe sees the gain dip and the cross-phase shift that goes with it.
"""

import numpy as np

from soamix.calibration import pi_shift_pump_power
from soamix.signalgen import OpticalEnvelope, cw, dbm_to_w, gaussian_pulse_train, make_time_grid, pulse_peak_power
from soamix.soa import SOAParams, propagate, steady_state_h

soa = SOAParams()
grid = make_time_grid(10e9, 1e9, 32768)
probe = cw(grid, 1557.4, dbm_to_w(-18.0))

# CW operating point: the dynamic solver settles on the static fixed point
_, trace = propagate(soa, [probe])
print(f"small-signal gain {10 * np.log10(np.exp(soa.h0)):.2f} dB, "
      f"with probe {10 * np.log10(np.exp(trace.h[0])):.3f} dB "
      f"(fixed point {10 * np.log10(np.exp(steady_state_h(soa, probe.mean_power))):.3f} dB)")

# pump at the power that gives a pi phase swing
peak = pi_shift_pump_power(soa, 1.3e-12, 10e9, probe.mean_power * 2)
pump = gaussian_pulse_train(grid, 1.3e-12, peak / pulse_peak_power(1.0, 1.3e-12, 10e9))
print(f"pi-shift pump: peak {peak * 1e3:.2f} mW, mean {10 * np.log10(pump.mean_power / 1e-3):.2f} dBm")

(out, _), trace = propagate(soa, [probe, pump])
phase = trace.phase(soa.alpha)
print(f"log-gain swings {trace.h.min():.3f} .. {trace.h.max():.3f} (h0 = {soa.h0:.3f})")
print(f"XPM phase swing within a period {np.ptp(phase):.3f} rad")

# gain recovery is slow: sinusoidal drive is followed at 1 GHz, much less at 10 GHz
for f in (1e9, 10e9):
    p = 1e-3 * (1 + 0.5 * np.cos(2 * np.pi * f * grid.t))
    _, tr = propagate(soa, [OpticalEnvelope(grid, np.sqrt(p).astype(complex), 1557.4)])
    print(f"h excursion under {f / 1e9:4.0f} GHz drive: {np.ptp(tr.h):.4f}")
