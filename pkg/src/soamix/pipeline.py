"""End-to-end measurement of one (architecture, MI) cell.

A :class:`Bench` holds everything that stays fixed across a sweep (grid,
devices, sources, detection); an :class:`OperatingPoint` holds the port
powers and delay that the calibration procedures choose.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .detection import FLOOR_DBM, OBPFParams, PhotodiodeParams, RFSpectrum, detect, electrical_input_power, rf_spectrum
from .metrics import MixerReport, make_report
from .mzi import Architecture, ArchitectureConfig, MixerOutput, run_mixer, set_dark_port
from .signalgen import ElectricalWaveform, OpticalEnvelope, TimeGrid, cw, dbm_to_w, gaussian_pulse_train, make_time_grid, mzm_modulated_cw
from .soa import SOAParams


class InfeasibleCell(ValueError):
    """A cell whose metrics are undefined (e.g. no input tone at MI = 0)."""


@dataclass(frozen=True)
class Bench:
    grid: TimeGrid = field(default_factory=lambda: make_time_grid(10e9, 1e9, 32768))
    soa_upper: SOAParams = field(default_factory=SOAParams)
    soa_lower: SOAParams = field(default_factory=SOAParams)
    pulse_fwhm: float = 1.3e-12
    pulse_wavelength: float = 1550.0  # nm
    signal_wavelength: float = 1557.4  # nm
    obpf_bandwidth: float = 0.56  # nm
    loss_db: float = 5.6
    photodiode: PhotodiodeParams = field(default_factory=PhotodiodeParams)

    def refined(self, factor: int = 2) -> "Bench":
        return replace(self, grid=self.grid.with_samples(self.grid.n_samples * factor))

    def pulse_train(self, mean_dbm: float) -> OpticalEnvelope:
        return gaussian_pulse_train(self.grid, self.pulse_fwhm, dbm_to_w(mean_dbm), self.pulse_wavelength)

    def sinusoid(self, mean_dbm: float, mi: float) -> OpticalEnvelope:
        return mzm_modulated_cw(self.grid, self.signal_wavelength, dbm_to_w(mean_dbm), mi)

    def cw_signal(self, power_dbm: float) -> OpticalEnvelope:
        return cw(self.grid, self.signal_wavelength, dbm_to_w(power_dbm))

    def obpf_for(self, kind: Architecture) -> OBPFParams:
        """Filter centred on whatever enters port C for this architecture."""
        centre = self.signal_wavelength if kind.is_switching else self.pulse_wavelength
        return OBPFParams(centre, self.obpf_bandwidth)


@dataclass(frozen=True)
class OperatingPoint:
    """Port mean powers in dBm plus the differential delay in seconds."""

    switching_pump_dbm: float = -10.5
    port_d_dbm: float = -10.7
    switching_signal_dbm: float = -15.0
    odl_delay: float | None = None
    modulation_signal_dbm: float = -14.0
    modulation_pulse_dbm: float = -15.0


@dataclass(frozen=True, eq=False)
class CellResult:
    report: MixerReport
    spectrum: RFSpectrum
    waveform: ElectricalWaveform
    output: MixerOutput
    bias_phase: float


def architecture_inputs(bench: Bench, kind: Architecture, op: OperatingPoint, signal: OpticalEnvelope
                        ) -> tuple[ArchitectureConfig, OpticalEnvelope, OpticalEnvelope]:
    """Arrange sources on ports A/C for ``kind`` and bias the dark port.

    Returns the architecture config and the (pump, probe) envelopes for
    :func:`run_mixer`. ``signal`` is the data-bearing optical signal.
    """
    kind = Architecture(kind)
    if kind.is_switching:
        pump = bench.pulse_train(op.switching_pump_dbm)
        probe = signal
        ports = {"A": op.switching_pump_dbm, "C": op.switching_signal_dbm}
        delay = None
        if kind is Architecture.SWITCHING_DIFFERENTIAL:
            if op.odl_delay is None:
                raise ValueError("differential configuration needs an ODL delay")
            ports["D"] = op.port_d_dbm
            delay = op.odl_delay
    else:
        pump = signal
        probe = bench.pulse_train(op.modulation_pulse_dbm)
        ports = {"A": op.modulation_signal_dbm, "C": op.modulation_pulse_dbm}
        delay = None
    bias = set_dark_port(bench.soa_upper, bench.soa_lower, probe.mean_power)
    arch = ArchitectureConfig(kind, bias_phase=bias, odl_delay=delay, port_powers=ports)
    return arch, pump, probe


def measure_output(bench: Bench, kind: Architecture, out: MixerOutput, port: str = "I") -> tuple[ElectricalWaveform, RFSpectrum]:
    w = detect(out.channels(port), bench.obpf_for(kind), bench.loss_db, bench.photodiode)
    return w, rf_spectrum(w, bench.photodiode)


def simulate_cell(bench: Bench, kind: Architecture | str, mi: float, op: OperatingPoint) -> CellResult:
    """Synthesize inputs, run the mixer, detect port I and compute metrics."""
    kind = Architecture(kind)
    mean_dbm = op.switching_signal_dbm if kind.is_switching else op.modulation_signal_dbm
    signal = bench.sinusoid(mean_dbm, mi)
    p_in = electrical_input_power(signal, bench.photodiode)
    if p_in <= FLOOR_DBM:
        raise InfeasibleCell(f"no {bench.grid.f_if:g} Hz input tone at MI = {mi:g}; conversion gain undefined")
    arch, pump, probe = architecture_inputs(bench, kind, op, signal)
    out = run_mixer(arch, pump, probe, bench.soa_upper, bench.soa_lower)
    w, spec = measure_output(bench, kind, out)
    report = make_report(kind.value, mi, spec, p_in, bench.grid.f_rep, bench.grid.f_if, bench.loss_db)
    return CellResult(report, spec, w, out, arch.bias_phase)


def modulation_depth_for(p_in_dbm: float, mean_w: float, pd: PhotodiodeParams) -> float:
    """Depth m giving a detected ``f_if`` tone of ``p_in_dbm`` at mean power ``mean_w``.

    The tone power is ``(R * mean * m)^2 * load / 2``.
    """
    amp = math.sqrt(2.0 * dbm_to_w(p_in_dbm) / pd.load)
    return amp / (pd.responsivity * mean_w)
