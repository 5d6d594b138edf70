"""Command-line entry point: ``soamix run|calibrate|oracle|spectrum``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..calibration import (CalibrationError, hd2_power_sweep, pi_shift_pump_power, quasi_linear_region,
                           static_characterization, tune_odl, default_delay_grid, write_curve_csv)
from ..mzi import Architecture, set_dark_port
from ..pipeline import InfeasibleCell, simulate_cell
from ..signalgen import GridError, dbm_to_w, pulse_peak_power, w_to_dbm
from ..soa import ConvergenceError
from .config import ConfigError, ScenarioConfig
from .oracle import OracleGateError, compare_spectra, ideal_sampler_oracle, linearized_spectrum
from .output import emit_outputs, spectrum_filename
from .scenario import calibrate, run_scenario

EXIT_OK, EXIT_CONFIG, EXIT_PHYSICS, EXIT_ORACLE = 0, 2, 3, 4


def _config(args) -> ScenarioConfig:
    cfg = ScenarioConfig.load(args.config) if args.config else ScenarioConfig.from_dict({})
    overrides = {}
    if args.arch:
        overrides["architectures"] = args.arch
    if getattr(args, "workers", None):
        overrides["workers"] = args.workers
    return cfg.with_overrides(**overrides) if overrides else cfg


def cmd_run(args) -> int:
    cfg = _config(args)
    run = run_scenario(cfg, mi_grid=args.mi)
    emit_outputs(run, args.out, cfg.spectrum_max_hz)
    print(run.summary.render(), end="")
    for f in run.failures:
        print(f"failed cell {f.arch} mi={f.mi:g}: {f.reason}")
    print(f"wrote {len(run.reports)} reports to {Path(args.out) / 'reports.csv'}")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    cfg = _config(args)
    bench, op = cfg.bench(), cfg.operating_point()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.procedure == "static":
        probe = dbm_to_w(op.switching_signal_dbm)
        bias = set_dark_port(bench.soa_upper, bench.soa_lower, probe)
        c = static_characterization(bench.soa_upper, bench.soa_lower, bias, probe, cfg.static_grid())
        r = quasi_linear_region(c)
        write_curve_csv(out / "static_transfer.csv", "p_a_dbm", "p_j_mw", c.p_a_dbm, c.p_j_mw)
        print(f"static: quasi-linear region {r.lo_dbm:.2f}..{r.hi_dbm:.2f} dBm, centre {r.center_dbm:.2f} dBm")
    elif args.procedure == "hd2":
        best, pts = hd2_power_sweep(bench, op, cfg.hd2_grid(), cfg.data["hd2_sweep"]["p_e_in_dbm"])
        ok = [p for p in pts if p.feasible]
        write_curve_csv(out / "hd2_sweep.csv", "p_a_dbm", "hd2_db", [p.p_a_dbm for p in ok], [p.hd2_db for p in ok])
        print(f"hd2: minimum at {best:.2f} dBm ({min(p.hd2_db for p in ok):.2f} dB)")
    elif args.procedure == "odl":
        odl = cfg.data["odl"]
        best, pts = tune_odl(bench, op, default_delay_grid(bench.grid, float(odl["step"])), float(odl["margin_db"]))
        write_curve_csv(out / "odl_flatness.csv", "delay_ps", "spread_db", [p.delay * 1e12 for p in pts], [p.spread_db for p in pts])
        spread = min(p.spread_db for p in pts if p.delay == best)
        print(f"odl: best delay {best * 1e12:.3f} ps, comb spread {spread:.2f} dB")
    else:
        peak = pi_shift_pump_power(bench.soa_upper, bench.pulse_fwhm, bench.grid.f_rep, dbm_to_w(op.switching_signal_dbm))
        mean = peak / pulse_peak_power(1.0, bench.pulse_fwhm, bench.grid.f_rep)
        print(f"pi-shift: peak {peak * 1e3:.3f} mW, mean {w_to_dbm(mean):.2f} dBm")
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = _config(args)
    bench = cfg.bench()
    m = args.mi[0] if args.mi else 0.8
    sim = linearized_spectrum(bench, m, 1e-3)
    ref = ideal_sampler_oracle(bench.pulse_fwhm, bench.grid.f_rep, bench.grid.f_if, m, 1e-3, bench.photodiode, bench.grid)
    err, freq, s, r = compare_spectra(sim, ref)
    print(f"oracle: max deviation {err:.3e} dB at {freq:g} Hz")
    if err > 0.1:
        raise OracleGateError(err, freq, s, r)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = _config(args)
    if not args.arch or len(args.arch) != 1 or not args.mi or len(args.mi) != 1:
        raise ConfigError("spectrum needs exactly one --arch and one --mi")
    kind = Architecture(args.arch[0])
    cal = calibrate(cfg, static=False)
    cell = simulate_cell(cfg.bench(), kind, args.mi[0], cal.op)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / spectrum_filename(kind.value, args.mi[0])
    cell.spectrum.to_csv(path, cfg.spectrum_max_hz)
    r = cell.report
    print(f"{kind.value} mi={r.mi:g}: Gc {r.gc_up_db:.3f} dB, HD2 {r.hd2_db:.3f} dB, "
          f"HD3 {r.hd3_db:.3f} dB, THD {r.thd_db:.3f} dB -> {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario JSON (defaults used when omitted)")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    common.add_argument("--arch", action="append", choices=[a.value for a in Architecture],
                        help="restrict to an architecture (repeatable)")
    common.add_argument("--mi", action="append", type=float, help="modulation index (repeatable)")
    common.add_argument("--workers", type=int, help="worker processes for the cell sweep")
    common.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="soamix", description="SOA-MZI photonic mixer simulations")
    sub = p.add_subparsers(dest="verb", required=True)
    sub.add_parser("run", parents=[common], help="full scenario").set_defaults(func=cmd_run)
    cal = sub.add_parser("calibrate", parents=[common], help="one calibration procedure")
    cal.add_argument("procedure", choices=["static", "hd2", "odl", "pi-shift"])
    cal.set_defaults(func=cmd_calibrate)
    sub.add_parser("oracle", parents=[common], help="linearized oracle gate").set_defaults(func=cmd_oracle)
    sub.add_parser("spectrum", parents=[common], help="single-cell spectrum dump").set_defaults(func=cmd_spectrum)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OracleGateError as exc:
        print(f"oracle gate failed: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (ConvergenceError, CalibrationError, InfeasibleCell, GridError, ValueError) as exc:
        print(f"physics error: {exc}", file=sys.stderr)
        return EXIT_PHYSICS


if __name__ == "__main__":
    sys.exit(main())
