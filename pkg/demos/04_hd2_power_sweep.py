"""
Choosing the Modulation operating point
=======================================

In the Modulation architecture the sinusoid drives port A. Sweeping its mean
power while re-solving the depth keeps the detected 1 GHz tone fixed; HD2 at
the 8 GHz product then has a clear minimum, which sets the operating point.
"""

import numpy as np

from soamix.calibration import hd2_power_sweep
from soamix.pipeline import Bench, OperatingPoint

best, points = hd2_power_sweep(Bench(), OperatingPoint(), np.arange(-20.0, -6.9, 1.0))
for p in points:
    flag = "" if p.feasible else "  (needs depth > 1, skipped)"
    print(f"{p.p_a_dbm:6.1f} dBm   m = {p.m:.3f}   HD2 = {p.hd2_db:7.2f} dB{flag}")
print(f"lowest HD2 at {best:.1f} dBm")
