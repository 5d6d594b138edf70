"""
Tuning the differential delay line
==================================

In the differential configuration a delayed copy of the pump saturates the
lower arm and closes the switching window. The delay is chosen so the comb
lines at 10, 20, 30 and 40 GHz are as equal as possible under a CW probe.
"""

from soamix.calibration import comb_lines, tune_odl
from soamix.pipeline import Bench, OperatingPoint

bench, op = Bench(), OperatingPoint()
best, points = tune_odl(bench, op)

print("delay (ps)  10 GHz line (dBm)  spread (dB)")
for p in points[::8]:
    print(f"{p.delay * 1e12:9.2f}  {p.line10_dbm:17.2f}  {p.spread_db:11.2f}{'' if p.qualifies else '  dark'}")

spread = next(p.spread_db for p in points if p.delay == best)
std = comb_lines(bench, op, None)
print(f"best delay {best * 1e12:.2f} ps: spread {spread:.2f} dB; standard configuration spread {std.max() - std.min():.2f} dB")
