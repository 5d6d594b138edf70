"""Filesystem emission: report CSV, per-cell spectra, summary and plots."""

from __future__ import annotations

from pathlib import Path

from ..calibration import write_curve_csv
from ..metrics import MixerReport, write_reports_csv
from .scenario import ComparisonSummary, ScenarioRun
from .svgplot import LinePlot


def spectrum_filename(arch: str, mi: float) -> str:
    return f"{arch}_{mi:.2f}.csv"


def _prepare(out_dir) -> Path:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise OSError(f"output directory {out} is not writable: {exc}") from exc
    return out


def _by_arch(reports: list[MixerReport], attr: str) -> dict[str, tuple[list[float], list[float]]]:
    table: dict[str, tuple[list[float], list[float]]] = {}
    for r in reports:
        xs, ys = table.setdefault(r.arch, ([], []))
        xs.append(r.mi)
        ys.append(getattr(r, attr))
    return table


def emit_calibration(run: ScenarioRun, out: Path) -> list[Path]:
    """Calibration curves as CSV plus the static and HD2 figures."""
    cal = run.calibration
    written = []
    if cal.static_curve is not None:
        c = cal.static_curve
        write_curve_csv(out / "static_transfer.csv", "p_a_dbm", "p_j_mw", c.p_a_dbm, c.p_j_mw)
        write_curve_csv(out / "static_derivative.csv", "p_a_dbm", "dp_j_dp_a", c.p_a_dbm, c.derivative)
        plot = LinePlot("Static characterization (port J)", "Port A power (dBm)", "P_J (mW) / slope (norm.)")
        plot.add("P_J", c.p_a_dbm, c.p_j_mw, markers=False)
        scale = max(abs(c.derivative).max(), 1e-30) / max(abs(c.p_j_mw).max(), 1e-30)
        plot.add("|slope|, scaled", c.p_a_dbm, abs(c.derivative) / scale, markers=False)
        if cal.region is not None:
            plot.vlines += [(cal.region.lo_dbm, "QLR"), (cal.region.hi_dbm, ""), (cal.region.center_dbm, "centre")]
        plot.save(out / "fig6_static.svg")
        written += [out / "static_transfer.csv", out / "static_derivative.csv", out / "fig6_static.svg"]
    feasible = [p for p in cal.hd2_points if p.feasible]
    if feasible:
        write_curve_csv(out / "hd2_sweep.csv", "p_a_dbm", "hd2_db", [p.p_a_dbm for p in feasible], [p.hd2_db for p in feasible])
        plot = LinePlot("HD2 versus port A power (modulation)", "Port A power (dBm)", "HD2 (dB)")
        plot.add("HD2", [p.p_a_dbm for p in feasible], [p.hd2_db for p in feasible])
        plot.save(out / "fig7_hd2.svg")
        written += [out / "hd2_sweep.csv", out / "fig7_hd2.svg"]
    if cal.odl_points:
        write_curve_csv(out / "odl_flatness.csv", "delay_ps", "spread_db",
                        [p.delay * 1e12 for p in cal.odl_points], [p.spread_db for p in cal.odl_points])
        written.append(out / "odl_flatness.csv")
    return written


def emit_outputs(run: ScenarioRun | list[MixerReport], out_dir, spectrum_max_hz: float = 45e9) -> list[Path]:
    """Write reports, spectra, summary and figures; returns the paths written.

    A bare report list (no spectra or calibration) is accepted; an empty
    list produces a headers-only ``reports.csv`` and nothing else.
    """
    if not isinstance(run, ScenarioRun):
        from .scenario import Calibration
        from ..pipeline import OperatingPoint
        run = ScenarioRun(list(run), {}, [], Calibration(OperatingPoint()))
    out = _prepare(out_dir)
    write_reports_csv(run.reports, out / "reports.csv")
    written = [out / "reports.csv"]
    if not run.reports:
        return written
    if run.spectra:
        sdir = out / "spectra"
        sdir.mkdir(exist_ok=True)
        for (arch, mi), spec in run.spectra.items():
            path = sdir / spectrum_filename(arch, mi)
            spec.to_csv(path, spectrum_max_hz)
            written.append(path)
    summary = ComparisonSummary.from_reports(run.reports).render()
    if run.failures:
        summary += "## failed cells\n" + "".join(f"{f.arch} mi={f.mi:g}: {f.reason}\n" for f in run.failures)
    (out / "summary.txt").write_text(summary)
    written.append(out / "summary.txt")
    for name, attr, title, ylabel in (("fig8_gain.svg", "gc_up_db", "Conversion gain, 1 to 9 GHz", "G_c (dB)"),
                                      ("fig9_thd.svg", "thd_db", "Total harmonic distortion at 9 GHz", "THD (dB)")):
        plot = LinePlot(title, "Modulation index", ylabel)
        for arch, (xs, ys) in _by_arch(run.reports, attr).items():
            plot.add(arch, xs, ys)
        plot.save(out / name)
        written.append(out / name)
    written += emit_calibration(run, out)
    return written
