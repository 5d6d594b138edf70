"""Mixer figures of merit: modulation index, conversion gain, HD2/HD3/THD.

Distortion is read on the sidebands of the first comb line ``f_rep``. With
``f_rep = 10 GHz`` and ``f_if = 1 GHz`` the lower-sideband target is 9 GHz
and its distortion products sit at 8 GHz (HD2) and 7 GHz (HD3).
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .detection import FLOOR_DBM, RFSpectrum
from .signalgen import ElectricalWaveform

REPORT_COLUMNS = ["arch", "mi", "p_in_dbm", "p_out_dbm", "gc_db", "hd2_db", "hd3_db", "thd_db"]


@dataclass(frozen=True)
class MixerReport:
    arch: str
    mi: float
    gc_up_db: float
    hd2_db: float
    hd3_db: float
    thd_db: float
    p_in_1ghz_dbm: float
    p_out_9ghz_dbm: float
    # upper-sideband (11/12/13 GHz) readings, informational
    hd2_upper_db: float = math.nan
    hd3_upper_db: float = math.nan
    thd_upper_db: float = math.nan

    def csv_row(self) -> list[str]:
        vals = [self.p_in_1ghz_dbm, self.p_out_9ghz_dbm, self.gc_up_db, self.hd2_db, self.hd3_db, self.thd_db]
        return [self.arch, f"{self.mi:.6g}", *(f"{v:.6f}" for v in vals)]

    def as_dict(self) -> dict:
        return asdict(self)


def modulation_index(w: ElectricalWaveform) -> float:
    """Peak deviation over mean, ``(max - mean) / mean``."""
    mean = float(np.mean(w.samples))
    if mean <= 0:
        raise ValueError("modulation index needs a positive mean signal")
    return (float(np.max(w.samples)) - mean) / mean


def conversion_gain(p_out_9ghz: float, p_in_1ghz: float) -> float:
    if not (math.isfinite(p_out_9ghz) and math.isfinite(p_in_1ghz)):
        raise ValueError("conversion gain needs finite powers")
    return p_out_9ghz - p_in_1ghz


def _sideband(f_rep: float, f_if: float, k: int, side: str) -> float:
    if side == "lower":
        return f_rep - k * f_if
    if side == "upper":
        return f_rep + k * f_if
    raise ValueError(f"side must be 'lower' or 'upper', got {side!r}")


def hd(spec: RFSpectrum, f_rep: float, f_if: float, order: int, side: str = "lower") -> float:
    """Order-``order`` distortion product relative to the target sideband, dB."""
    target = spec.power_at(_sideband(f_rep, f_if, 1, side))
    return spec.power_at(_sideband(f_rep, f_if, order, side)) - target


def hd2(spec: RFSpectrum, f_rep: float, f_if: float, side: str = "lower") -> float:
    return hd(spec, f_rep, f_if, 2, side)


def hd3(spec: RFSpectrum, f_rep: float, f_if: float, side: str = "lower") -> float:
    return hd(spec, f_rep, f_if, 3, side)


def thd(spec: RFSpectrum, f_rep: float, f_if: float, side: str = "lower") -> float:
    """Sum of the 2nd and 3rd order products over the target tone, dB."""
    p = spec.powers_w
    k9 = spec.bin_of(_sideband(f_rep, f_if, 1, side))
    if spec.powers[k9] <= FLOOR_DBM:
        raise ValueError("target sideband carries no power")
    target = p[k9]
    dist = p[spec.bin_of(_sideband(f_rep, f_if, 2, side))] + p[spec.bin_of(_sideband(f_rep, f_if, 3, side))]
    return 10.0 * math.log10(dist / target)


def make_report(arch: str, mi: float, spec: RFSpectrum, p_in_dbm: float, f_rep: float, f_if: float,
                loss_db: float = 0.0) -> MixerReport:
    """Assemble a report from the analyser spectrum.

    ``loss_db`` is the optical loss between the mixer output and the
    photodiode; its electrical equivalent (twice the value, square-law
    detection) is added back so output power refers to the mixer output.
    """
    p_out = spec.power_at(f_rep - f_if) + 2.0 * loss_db
    return MixerReport(
        arch=arch,
        mi=mi,
        gc_up_db=conversion_gain(p_out, p_in_dbm),
        hd2_db=hd2(spec, f_rep, f_if),
        hd3_db=hd3(spec, f_rep, f_if),
        thd_db=thd(spec, f_rep, f_if),
        p_in_1ghz_dbm=p_in_dbm,
        p_out_9ghz_dbm=p_out,
        hd2_upper_db=hd2(spec, f_rep, f_if, "upper"),
        hd3_upper_db=hd3(spec, f_rep, f_if, "upper"),
        thd_upper_db=thd(spec, f_rep, f_if, "upper"),
    )


def write_reports_csv(reports: list[MixerReport], path) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_COLUMNS)
        for r in reports:
            w.writerow(r.csv_row())
