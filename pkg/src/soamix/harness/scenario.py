"""Scenario runner: calibrate, sweep (architecture, MI) cells, summarize."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from ..calibration import (DelayPoint, QuasiLinearRegion, StaticCurve, SweepPoint, hd2_power_sweep,
                           quasi_linear_region, static_characterization, tune_odl, default_delay_grid)
from ..detection import RFSpectrum
from ..metrics import MixerReport
from ..mzi import Architecture, set_dark_port
from ..pipeline import Bench, OperatingPoint, simulate_cell
from ..signalgen import dbm_to_w
from .config import ScenarioConfig
from .oracle import linearized_mode_run

log = logging.getLogger(__name__)

# slack allowed per MI step when judging a curve monotone
TREND_SLACK_DB = 0.3


@dataclass(frozen=True)
class CellFailure:
    arch: str
    mi: float
    reason: str


@dataclass
class Calibration:
    op: OperatingPoint
    static_curve: StaticCurve | None = None
    region: QuasiLinearRegion | None = None
    hd2_points: list[SweepPoint] = field(default_factory=list)
    odl_points: list[DelayPoint] = field(default_factory=list)


@dataclass
class ScenarioRun:
    reports: list[MixerReport]
    spectra: dict[tuple[str, float], RFSpectrum]
    failures: list[CellFailure]
    calibration: Calibration

    @property
    def summary(self) -> "ComparisonSummary":
        return ComparisonSummary.from_reports(self.reports)


def _trend(values: list[float], slack: float = TREND_SLACK_DB) -> bool:
    """Ends higher than it starts and never drops by more than ``slack`` per step."""
    if len(values) < 2:
        return False
    steps = np.diff(values)
    return bool(values[-1] > values[0] and np.all(steps >= -slack))


@dataclass(frozen=True)
class ComparisonSummary:
    """Switching-minus-modulation gaps per MI and per-architecture trend flags.

    Gain gaps are switching minus modulation (positive favours switching);
    THD gaps are switching minus modulation (positive favours modulation).
    """

    mi: tuple[float, ...]
    gain: dict[str, dict[float, float]]
    thd: dict[str, dict[float, float]]
    gain_gap: dict[str, dict[float, float]]
    thd_gap: dict[str, dict[float, float]]
    gain_rises: dict[str, bool]
    thd_rises: dict[str, bool]

    @classmethod
    def from_reports(cls, reports: list[MixerReport]) -> "ComparisonSummary":
        gain: dict[str, dict[float, float]] = {}
        thd: dict[str, dict[float, float]] = {}
        for r in reports:
            gain.setdefault(r.arch, {})[r.mi] = r.gc_up_db
            thd.setdefault(r.arch, {})[r.mi] = r.thd_db
        mod = Architecture.MODULATION.value
        gain_gap, thd_gap = {}, {}
        for arch in gain:
            if arch == mod or mod not in gain:
                continue
            common = sorted(set(gain[arch]) & set(gain[mod]))
            gain_gap[arch] = {m: gain[arch][m] - gain[mod][m] for m in common}
            thd_gap[arch] = {m: thd[arch][m] - thd[mod][m] for m in common}
        mis = tuple(sorted({r.mi for r in reports}))
        rises = lambda table: {a: _trend([v[m] for m in sorted(v)]) for a, v in table.items()}
        return cls(mis, gain, thd, gain_gap, thd_gap, rises(gain), rises(thd))

    def render(self) -> str:
        lines = ["# conversion gain (dB) and THD (dB) per architecture and MI"]
        archs = list(self.gain)
        head = "mi      " + "".join(f"{a[:22]:>24}" for a in archs)
        lines.append("## gain")
        lines.append(head)
        for m in self.mi:
            lines.append(f"{m:<8.2f}" + "".join(f"{self.gain[a].get(m, math.nan):>24.3f}" for a in archs))
        lines.append("## thd")
        lines.append(head)
        for m in self.mi:
            lines.append(f"{m:<8.2f}" + "".join(f"{self.thd[a].get(m, math.nan):>24.3f}" for a in archs))
        for arch in self.gain_gap:
            lines.append(f"## {arch} minus modulation")
            lines.append("mi      gain_gap_db  thd_gap_db")
            for m in sorted(self.gain_gap[arch]):
                lines.append(f"{m:<8.2f}{self.gain_gap[arch][m]:>11.3f}{self.thd_gap[arch][m]:>12.3f}")
        lines.append("## trends (rising with MI)")
        for arch in self.gain:
            lines.append(f"{arch}: gain {self.gain_rises[arch]}, thd {self.thd_rises[arch]}")
        return "\n".join(lines) + "\n"


def calibrate(cfg: ScenarioConfig, bench: Bench | None = None, static: bool = True) -> Calibration:
    """Resolve operating-point entries left open in the config."""
    bench = bench or cfg.bench()
    op = cfg.operating_point()
    cal = Calibration(op)
    archs = cfg.architectures
    if static:
        probe = dbm_to_w(op.switching_signal_dbm)
        bias = set_dark_port(bench.soa_upper, bench.soa_lower, probe)
        cal.static_curve = static_characterization(bench.soa_upper, bench.soa_lower, bias, probe, cfg.static_grid())
        cal.region = quasi_linear_region(cal.static_curve)
        log.info("static: quasi-linear region %.2f..%.2f dBm", cal.region.lo_dbm, cal.region.hi_dbm)
    if Architecture.MODULATION in archs and op.modulation_signal_dbm is None:
        best, cal.hd2_points = hd2_power_sweep(bench, op, cfg.hd2_grid(), cfg.data["hd2_sweep"]["p_e_in_dbm"])
        op = replace(op, modulation_signal_dbm=best)
    if Architecture.SWITCHING_DIFFERENTIAL in archs and op.odl_delay is None:
        odl = cfg.data["odl"]
        delays = default_delay_grid(bench.grid, float(odl["step"]))
        best, cal.odl_points = tune_odl(bench, op, delays, float(odl["margin_db"]))
        op = replace(op, odl_delay=best)
    cal.op = op
    return cal


def _run_cell(bench: Bench, arch: Architecture, mi: float, op: OperatingPoint):
    try:
        cell = simulate_cell(bench, arch, mi, op)
    except Exception as exc:  # one bad cell must not sink the sweep
        return CellFailure(arch.value, mi, f"{type(exc).__name__}: {exc}")
    return cell.report, cell.spectrum


def run_scenario(cfg: ScenarioConfig, mi_grid=None, workers: int | None = None, gate: bool = True) -> ScenarioRun:
    """Calibrate then evaluate every (architecture, MI) cell.

    ``mi_grid`` overrides the configured grid without validation, which lets
    a caller probe edge cells such as MI = 0 (recorded as a failure). Cells
    are ordered by architecture then ascending MI regardless of ``workers``.
    """
    bench = cfg.bench()
    if gate:
        linearized_mode_run(bench)
    cal = calibrate(cfg, bench)
    mis = sorted(float(m) for m in (cfg.mi_grid if mi_grid is None else mi_grid))
    jobs = [(arch, mi) for arch in cfg.architectures for mi in mis]
    workers = cfg.workers if workers is None else workers
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_cell, bench, a, m, cal.op) for a, m in jobs]
            results = [f.result() for f in futures]
    else:
        results = [_run_cell(bench, a, m, cal.op) for a, m in jobs]
    reports, spectra, failures = [], {}, []
    for (arch, mi), res in zip(jobs, results):
        if isinstance(res, CellFailure):
            log.warning("cell %s mi=%g failed: %s", arch.value, mi, res.reason)
            failures.append(res)
            continue
        report, spec = res
        reports.append(report)
        spectra[(arch.value, mi)] = spec
    return ScenarioRun(reports, spectra, failures, cal)
