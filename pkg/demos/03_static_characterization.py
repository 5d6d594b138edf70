"""
Static transfer and the quasi-linear region
===========================================

With a CW probe at port C and a CW pump swept at port A, port J traces the
static transfer of the interferometer. Its slope, smoothed with a 7-point
moving average, is flat over a range of pump powers: the quasi-linear region.
"""

from pathlib import Path

from soamix.calibration import quasi_linear_region, region_satisfies, static_characterization
from soamix.harness.svgplot import LinePlot
from soamix.mzi import set_dark_port
from soamix.signalgen import dbm_to_w
from soamix.soa import SOAParams
import numpy as np

soa = SOAParams()
probe = dbm_to_w(-15.0)
bias = set_dark_port(soa, soa, probe)
print(f"dark-port bias {bias:.3e} rad")

curve = static_characterization(soa, soa, bias, probe, np.arange(-30.0, 0.01, 0.5))
region = quasi_linear_region(curve)
print(f"quasi-linear region {region.lo_dbm:.1f} .. {region.hi_dbm:.1f} dBm, centre {region.center_dbm:.2f} dBm")
print("re-check of the 20 % slope criterion:", region_satisfies(curve, region))

out = Path("demo_out")
out.mkdir(exist_ok=True)
plot = LinePlot("Static response at port J", "Port A power (dBm)", "P_J (mW)")
plot.add("P_J", curve.p_a_dbm, curve.p_j_mw, markers=False)
plot.vlines += [(region.lo_dbm, "QLR"), (region.hi_dbm, "")]
plot.save(out / "static.svg")
print("wrote", out / "static.svg")
