"""Operating-point procedures: static transfer, HD2 power sweep, ODL tuning,
and the pump power that gives a pi phase shift.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from .detection import FLOOR_DBM
from .mzi import Architecture, run_mixer, static_port_powers
from .pipeline import Bench, OperatingPoint, architecture_inputs, measure_output, modulation_depth_for, simulate_cell
from .signalgen import TimeGrid, dbm_to_w, gaussian_pulse_train, make_time_grid, pulse_peak_power, w_to_dbm
from .soa import SOAParams, integrate_log_gain, steady_state_h

log = logging.getLogger(__name__)

SMOOTH_ORDER = 7
COMB_LINES = (1, 2, 3, 4)  # multiples of f_rep read by the ODL flatness test


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class StaticCurve:
    p_a_dbm: np.ndarray
    p_j_mw: np.ndarray
    derivative: np.ndarray

    def __post_init__(self):
        n = len(self.p_a_dbm)
        if not (len(self.p_j_mw) == len(self.derivative) == n):
            raise ValueError("static curve arrays differ in length")
        if n < 2 * SMOOTH_ORDER + 1:
            raise ValueError(f"static curve needs at least {2 * SMOOTH_ORDER + 1} points")
        if np.any(np.diff(self.p_a_dbm) <= 0):
            raise ValueError("port-A power grid must increase monotonically")


@dataclass(frozen=True)
class QuasiLinearRegion:
    lo_dbm: float
    hi_dbm: float
    center_dbm: float


def smooth_ma7(y, mode: str = "shrink") -> np.ndarray:
    """Centred 7-point moving average.

    ``mode="shrink"`` narrows the window symmetrically near the ends;
    ``mode="wrap"`` treats the data as periodic.
    """
    y = np.asarray(y, dtype=float)
    n = y.size
    half = SMOOTH_ORDER // 2
    if n < SMOOTH_ORDER:
        raise ValueError(f"need at least {SMOOTH_ORDER} points to smooth, got {n}")
    if mode == "wrap":
        idx = (np.arange(n)[:, None] + np.arange(-half, half + 1)[None, :]) % n
        return y[idx].mean(axis=1)
    if mode != "shrink":
        raise ValueError(f"unknown mode {mode!r}")
    out = np.empty(n)
    for i in range(n):
        k = min(half, i, n - 1 - i)
        out[i] = y[i - k:i + k + 1].mean()
    return out


def curve_from_transfer(p_a_dbm, p_j_w) -> StaticCurve:
    """Differentiate a measured transfer in linear units and smooth it."""
    p_a_dbm = np.asarray(p_a_dbm, dtype=float)
    p_a_w = 1e-3 * 10.0 ** (p_a_dbm / 10.0)
    p_j_w = np.asarray(p_j_w, dtype=float)
    raw = np.gradient(p_j_w, p_a_w)
    return StaticCurve(p_a_dbm, p_j_w * 1e3, smooth_ma7(raw))


def static_characterization(soa_up: SOAParams, soa_low: SOAParams, bias: float, probe_power: float, p_a_grid) -> StaticCurve:
    """CW pump-probe transfer to port J versus pump power at port A."""
    p_a_dbm = np.asarray(p_a_grid, dtype=float)
    h_low = steady_state_h(soa_low, probe_power / 2.0)
    p_j = np.empty_like(p_a_dbm)
    for k, pa in enumerate(p_a_dbm):
        h_up = steady_state_h(soa_up, probe_power / 2.0 + dbm_to_w(pa))
        p_j[k] = static_port_powers(h_up, h_low, soa_up.alpha, soa_low.alpha, probe_power, bias)[1]
    return curve_from_transfer(p_a_dbm, p_j)


def _span_ok(d: np.ndarray, tolerance: float) -> bool:
    mean = d.mean()
    return mean > 0 and (d.max() - d.min()) / mean <= tolerance


def quasi_linear_region(c: StaticCurve, tolerance: float = 0.20) -> QuasiLinearRegion:
    """Longest span whose smoothed slope varies by at most ``tolerance``.

    Variation is ``(max - min) / mean`` of the slope magnitude; spans whose
    mean slope is below 10 % of the curve's peak slope are ignored, and ties
    go to the steeper span.
    """
    d = np.abs(np.asarray(c.derivative, dtype=float))
    n = d.size
    floor = 0.1 * d.max()
    best = None  # (length, mean, i, j)
    for i in range(n - 1):
        lo_val = hi_val = d[i]
        total = d[i]
        for j in range(i + 1, n):
            lo_val = min(lo_val, d[j])
            hi_val = max(hi_val, d[j])
            total += d[j]
            mean = total / (j - i + 1)
            # no early exit: a longer span can have a larger mean and pass again
            if (hi_val - lo_val) > tolerance * mean or mean <= floor:
                continue
            key = (j - i + 1, mean)
            if best is None or key > best[:2]:
                best = (j - i + 1, mean, i, j)
    if best is None:
        raise CalibrationError("no quasi-linear span found; widen the port-A power grid")
    _, _, i, j = best
    lo, hi = float(c.p_a_dbm[i]), float(c.p_a_dbm[j])
    return QuasiLinearRegion(lo, hi, 0.5 * (lo + hi))


def region_satisfies(c: StaticCurve, region: QuasiLinearRegion, tolerance: float = 0.20) -> bool:
    """Independent re-check of the slope-variation predicate on a region."""
    sel = (c.p_a_dbm >= region.lo_dbm) & (c.p_a_dbm <= region.hi_dbm)
    d = np.abs(c.derivative[sel])
    return sel.sum() >= 2 and _span_ok(d, tolerance + 1e-12) and d.mean() > 0.1 * np.abs(c.derivative).max()


@dataclass(frozen=True)
class SweepPoint:
    p_a_dbm: float
    m: float
    feasible: bool
    hd2_db: float = math.nan
    p_in_dbm: float = math.nan


def hd2_power_sweep(bench: Bench, op: OperatingPoint, p_a_grid, p_e_in_dbm: float | None = None
                    ) -> tuple[float, list[SweepPoint]]:
    """Modulation-architecture HD2 versus mean port-A power at fixed input tone.

    The depth is re-solved at every point so the detected ``f_if`` tone stays
    at ``p_e_in_dbm``; points that would need depth above 1 are skipped. The
    default tone is the largest one feasible over the whole grid.
    """
    grid_dbm = np.asarray(p_a_grid, dtype=float)
    if p_e_in_dbm is None:
        mean_lo = dbm_to_w(float(grid_dbm.min()))
        amp = bench.photodiode.responsivity * mean_lo
        p_e_in_dbm = w_to_dbm(amp**2 * bench.photodiode.load / 2.0)
    points = []
    for pa in grid_dbm:
        m = modulation_depth_for(p_e_in_dbm, dbm_to_w(pa), bench.photodiode)
        if m > 1.0 + 1e-9:
            points.append(SweepPoint(float(pa), m, False))
            continue
        m = min(m, 1.0)
        cell = simulate_cell(bench, Architecture.MODULATION, m, replace(op, modulation_signal_dbm=float(pa)))
        points.append(SweepPoint(float(pa), m, True, cell.report.hd2_db, cell.report.p_in_1ghz_dbm))
    feasible = [p for p in points if p.feasible]
    if not feasible:
        raise CalibrationError("no feasible point: the fixed input tone needs depth > 1 everywhere")
    best = min(feasible, key=lambda p: p.hd2_db)
    log.info("hd2 sweep: minimum HD2 %.2f dB at %.2f dBm (tone %.2f dBm)", best.hd2_db, best.p_a_dbm, p_e_in_dbm)
    return best.p_a_dbm, points


@dataclass(frozen=True)
class DelayPoint:
    delay: float
    line10_dbm: float
    spread_db: float
    qualifies: bool


def default_delay_grid(grid: TimeGrid, step: float = 1e-12) -> np.ndarray:
    """Delays on whole samples, about ``step`` apart, spanning [0, 1/f_rep)."""
    k = max(1, round(step / grid.dt))
    n_rep = int(math.floor(1.0 / (grid.f_rep * grid.dt)))
    return np.arange(0, n_rep, k) * grid.dt


def comb_lines(bench: Bench, op: OperatingPoint, delay: float | None) -> np.ndarray:
    """Port-I comb lines (dBm) at 1..4 x f_rep under a CW probe."""
    kind = Architecture.SWITCHING_STANDARD if delay is None else Architecture.SWITCHING_DIFFERENTIAL
    signal = bench.cw_signal(op.switching_signal_dbm)
    arch, pump, probe = architecture_inputs(bench, kind, replace(op, odl_delay=delay), signal)
    out = run_mixer(arch, pump, probe, bench.soa_upper, bench.soa_lower)
    _, spec = measure_output(bench, kind, out)
    return np.array([spec.power_at(n * bench.grid.f_rep) for n in COMB_LINES])


def tune_odl(bench: Bench, op: OperatingPoint, delay_grid=None, margin_db: float = 30.0) -> tuple[float, list[DelayPoint]]:
    """Delay giving the flattest 10/20/30/40 GHz comb under a CW probe.

    Flatness is the max-min spread of the lines in dB. Delays whose 10 GHz
    line is within ``margin_db`` of the zero-delay residual are excluded:
    there the two arms cancel and the comb is only the port-A/D imbalance.
    """
    delays = default_delay_grid(bench.grid) if delay_grid is None else np.asarray(delay_grid, dtype=float)
    floor = max(FLOOR_DBM, float(comb_lines(bench, op, 0.0)[0]))
    points = []
    for d in delays:
        lines = comb_lines(bench, op, float(d))
        ok = bool(lines[0] > floor + margin_db)
        points.append(DelayPoint(float(d), float(lines[0]), float(lines.max() - lines.min()), ok))
    candidates = [p for p in points if p.qualifies]
    if not candidates:
        raise CalibrationError("no delay lifts the 10 GHz line above the symmetric residual")
    best = min(candidates, key=lambda p: p.spread_db)
    log.info("odl: best delay %.3f ps, spread %.2f dB", best.delay * 1e12, best.spread_db)
    return best.delay, points


def max_phase_shift(soa: SOAParams, grid: TimeGrid, fwhm: float, peak_power: float, probe_power: float) -> float:
    """Peak XPM shift (rad) a pulse train imposes on a co-propagating probe.

    ``probe_power`` is the port-C power, half of which reaches the arm.
    """
    mean = peak_power / pulse_peak_power(1.0, fwhm, grid.f_rep)
    pump = gaussian_pulse_train(grid, fwhm, mean).power
    h = integrate_log_gain(soa, pump + probe_power / 2.0, grid.dt)
    h_ref = steady_state_h(soa, probe_power / 2.0)
    return float(np.max(np.abs(soa.alpha * (h - h_ref) / 2.0)))


def pi_shift_pump_power(soa: SOAParams, fwhm: float, f_rep: float, probe_power: float,
                        grid: TimeGrid | None = None, power_cap: float = 10.0) -> float:
    """Pulse peak power (W) whose XPM shift peaks at exactly pi."""
    if soa.alpha <= 0:
        raise CalibrationError("alpha = 0: no cross-phase modulation, pi shift unreachable")
    if grid is None:
        grid = make_time_grid(f_rep, f_rep, 4096)

    def shift(lp):
        return max_phase_shift(soa, grid, fwhm, math.exp(lp), probe_power) - math.pi

    lo = math.log(pulse_peak_power(1e-9, fwhm, f_rep))
    hi = math.log(power_cap)
    top = shift(hi)
    if top < 0:
        raise CalibrationError(f"pi shift unreachable below {power_cap:g} W (max shift {top + math.pi:.3f} rad)")
    lp = brentq(shift, lo, hi, xtol=1e-9)
    return math.exp(lp)


def write_curve_csv(path, x_name: str, y_name: str, xs, ys) -> None:
    with open(Path(path), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([x_name, y_name])
        for x, y in zip(xs, ys):
            w.writerow([f"{x:.9g}", f"{y:.9g}"])
