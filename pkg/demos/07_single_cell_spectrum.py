"""
Anatomy of one sampled spectrum
===============================

A single Switching cell at MI = 0.6: the detected port-I spectrum carries the
1 GHz signal replicated around every 10 GHz comb line. Conversion gain reads
the 9 GHz sideband; HD2 and HD3 read the 8 and 7 GHz products next to it.
"""

from soamix.detection import parseval_error
from soamix.mzi import Architecture
from soamix.pipeline import Bench, OperatingPoint, simulate_cell

bench = Bench()
cell = simulate_cell(bench, Architecture.SWITCHING_STANDARD, 0.6, OperatingPoint())
spec, r = cell.spectrum, cell.report

for f in range(0, 23):
    tag = {9: "target", 8: "HD2", 7: "HD3", 10: "comb", 20: "comb", 1: "signal"}.get(f, "")
    print(f"{f:3d} GHz  {spec.power_at(f * 1e9):9.2f} dBm  {tag}")

print(f"input tone {r.p_in_1ghz_dbm:.2f} dBm, output {r.p_out_9ghz_dbm:.2f} dBm (loss referred back)")
print(f"G_c {r.gc_up_db:.2f} dB, HD2 {r.hd2_db:.2f} dB, HD3 {r.hd3_db:.2f} dB, THD {r.thd_db:.2f} dB")
print(f"Parseval mismatch {parseval_error(cell.waveform, spec, bench.photodiode):.1e}")
