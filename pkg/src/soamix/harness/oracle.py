"""Closed-form ideal-sampler spectrum and the linearized verification run.

An ideal sampler multiplies the detected probe by the normalized pulse
transmission. For a Gaussian train with a sinusoidal probe every tone has a
closed form, which pins the DFT scaling and pulse normalization of the full
pipeline.
"""

from __future__ import annotations

import math

import numpy as np

from ..detection import FLOOR_DBM, PhotodiodeParams, RFSpectrum, _to_dbm, photodetect, rf_spectrum
from ..pipeline import Bench
from ..signalgen import LN2, TimeGrid, gaussian_pulse_train, make_time_grid, mzm_modulated_cw

# Bins below this level are ignored by the gate.
GATE_FLOOR_DBM = -120.0
GATE_TOLERANCE_DB = 0.1


class OracleGateError(RuntimeError):
    def __init__(self, max_err_db: float, worst_freq: float, sim_dbm: float, ref_dbm: float):
        self.max_err_db = max_err_db
        self.worst_freq = worst_freq
        super().__init__(
            f"linearized run deviates from the ideal-sampler oracle by {max_err_db:.4f} dB "
            f"at {worst_freq:g} Hz (simulated {sim_dbm:.4f} dBm, oracle {ref_dbm:.4f} dBm)")


def comb_coefficient(n: int, mean_power: float, fwhm: float, f_rep: float) -> float:
    """Fourier coefficient of a Gaussian pulse train normalized to ``mean_power``."""
    return mean_power * math.exp(-(math.pi * n * f_rep * fwhm) ** 2 / (4.0 * LN2))


def ideal_sampler_oracle(fwhm: float, f_rep: float, f_if: float, m: float, mean_power: float,
                         pd: PhotodiodeParams | None = None, grid: TimeGrid | None = None) -> RFSpectrum:
    """Analytic spectrum of ``R g(t) (1 + m cos 2 pi f_if t)``.

    ``g`` is the pulse train with mean ``mean_power``. The spectrum is laid
    out on the bins of ``grid`` (default: the commensurate 32768-sample grid).
    """
    pd = pd or PhotodiodeParams()
    if min(fwhm, f_rep, f_if, mean_power) <= 0:
        raise ValueError("fwhm, f_rep, f_if and mean_power must be positive")
    if not 0.0 <= m <= 1.0:
        raise ValueError("m must lie in [0, 1]")
    grid = grid or make_time_grid(f_rep, f_if)
    n_bins = grid.n_samples // 2 + 1
    k_rep = grid.bin_index(f_rep)
    k_if = grid.bin_index(f_if)
    # two-sided current phasors; the centred pulse makes every coefficient real
    x = np.zeros(grid.n_samples)
    n_max = (grid.n_samples // 2 + k_if) // k_rep + 1
    for n in range(-n_max, n_max + 1):
        c = pd.responsivity * comb_coefficient(n, mean_power, fwhm, f_rep)
        for dk, w in ((0, 1.0), (k_if, 0.5 * m), (-k_if, 0.5 * m)):
            k = n * k_rep + dk
            if abs(k) <= grid.n_samples // 2 and w:
                x[k % grid.n_samples] += w * c
    amp = np.abs(x[:n_bins])
    p = np.empty(n_bins)
    p[0] = amp[0] ** 2 * pd.load
    p[1:] = 2.0 * amp[1:] ** 2 * pd.load
    if grid.n_samples % 2 == 0:
        p[-1] = amp[-1] ** 2 * pd.load
    powers = _to_dbm(p)
    return RFSpectrum(bin_spacing=grid.bin_spacing, powers=powers, dc_power=float(powers[0]))


def linearized_spectrum(bench: Bench, m: float, mean_power: float) -> RFSpectrum:
    """Probe power times normalized pulse transmission, detected and analysed."""
    grid = bench.grid
    probe = mzm_modulated_cw(grid, bench.signal_wavelength, mean_power, m)
    pulses = gaussian_pulse_train(grid, bench.pulse_fwhm, 1.0, bench.pulse_wavelength)
    transmission = pulses.power / np.mean(pulses.power)
    w = photodetect(probe.replace(probe.samples * np.sqrt(transmission)), bench.photodiode)
    return rf_spectrum(w, bench.photodiode)


def compare_spectra(sim: RFSpectrum, ref: RFSpectrum, floor_dbm: float = GATE_FLOOR_DBM) -> tuple[float, float, float, float]:
    """Worst absolute dB difference over bins where either spectrum exceeds the floor.

    Returns ``(max_err_db, worst_freq, sim_dbm, ref_dbm)``.
    """
    if sim.powers.size != ref.powers.size or sim.bin_spacing != ref.bin_spacing:
        raise ValueError("spectra live on different bins")
    mask = (sim.powers > floor_dbm) | (ref.powers > floor_dbm)
    if not mask.any():
        return 0.0, 0.0, FLOOR_DBM, FLOOR_DBM
    diff = np.where(mask, np.abs(sim.powers - ref.powers), 0.0)
    k = int(np.argmax(diff))
    return float(diff[k]), k * sim.bin_spacing, float(sim.powers[k]), float(ref.powers[k])


def linearized_mode_run(bench: Bench | None = None, m: float = 0.8, mean_power: float = 1e-3,
                        tolerance_db: float = GATE_TOLERANCE_DB) -> RFSpectrum:
    """Run the linearized chain and gate it against the closed form.

    Raises :class:`OracleGateError` naming the worst bin when any bin above
    ``GATE_FLOOR_DBM`` is off by more than ``tolerance_db``.
    """
    bench = bench or Bench()
    sim = linearized_spectrum(bench, m, mean_power)
    ref = ideal_sampler_oracle(bench.pulse_fwhm, bench.grid.f_rep, bench.grid.f_if, m, mean_power,
                               bench.photodiode, bench.grid)
    err, freq, s, r = compare_spectra(sim, ref)
    if err > tolerance_db:
        raise OracleGateError(err, freq, s, r)
    return sim
