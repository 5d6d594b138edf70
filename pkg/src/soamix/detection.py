"""Optical filtering, loss, photodetection and RF spectrum readout."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .signalgen import ElectricalWaveform, GridError, OpticalEnvelope, TimeGrid

# Marker for bins with no power (log of zero).
FLOOR_DBM = -300.0
_FLOOR_W = 1e-3 * 10.0 ** (FLOOR_DBM / 10.0)
# Channels further than this many bandwidths from the filter centre are dropped.
REJECT_BANDWIDTHS = 5.0


@dataclass(frozen=True)
class OBPFParams:
    center_wavelength: float = 1557.4  # nm
    bandwidth_3db: float = 0.56  # nm

    def __post_init__(self):
        if self.bandwidth_3db <= 0:
            raise ValueError("bandwidth_3db must be positive")

    @property
    def bandwidth_hz(self) -> float:
        lam = self.center_wavelength * 1e-9
        return SPEED_OF_LIGHT * self.bandwidth_3db * 1e-9 / lam**2


@dataclass(frozen=True)
class PhotodiodeParams:
    responsivity: float = 1.0  # A/W
    load: float = 50.0  # ohm

    def __post_init__(self):
        if self.responsivity <= 0 or self.load <= 0:
            raise ValueError("responsivity and load must be positive")


def _to_dbm(p_w):
    p = np.maximum(np.asarray(p_w, dtype=float), _FLOOR_W)
    return 10.0 * np.log10(p / 1e-3)


@dataclass(frozen=True, eq=False)
class RFSpectrum:
    """Single-sided electrical power spectrum on exact DFT bins.

    ``powers[k]`` is the power in dBm of the tone at ``k * bin_spacing`` Hz;
    ``powers[0]`` repeats the DC power. Empty bins read ``FLOOR_DBM``.
    """

    bin_spacing: float
    powers: np.ndarray
    dc_power: float

    @property
    def freqs(self) -> np.ndarray:
        return np.arange(self.powers.size) * self.bin_spacing

    @property
    def powers_w(self) -> np.ndarray:
        return 1e-3 * 10.0 ** (self.powers / 10.0)

    def bin_of(self, freq: float) -> int:
        k = freq / self.bin_spacing
        kr = round(k)
        if abs(k - kr) > 1e-6 or not 0 <= kr < self.powers.size:
            raise GridError(f"{freq:g} Hz does not fall on a spectrum bin")
        return int(kr)

    def power_at(self, freq: float) -> float:
        """Tone power in dBm at a bin-aligned frequency."""
        return float(self.powers[self.bin_of(freq)])

    def total_power_w(self) -> float:
        return float(np.sum(self.powers_w[1:]) + 1e-3 * 10.0 ** (self.dc_power / 10.0))

    def to_csv(self, path, max_freq: float = 45e9) -> None:
        n = min(self.powers.size, int(math.floor(max_freq / self.bin_spacing + 1e-9)) + 1)
        with open(Path(path), "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["freq_hz", "power_dbm"])
            for k in range(n):
                w.writerow([f"{k * self.bin_spacing:.1f}", f"{self.powers[k]:.6f}"])


def _optical_frequency(wavelength_nm: float) -> float:
    return SPEED_OF_LIGHT / (wavelength_nm * 1e-9)


def obpf(e: OpticalEnvelope, p: OBPFParams) -> OpticalEnvelope:
    """Gaussian band-pass with unity centre gain and flat phase.

    The power response is ``exp(-4 ln2 (f/B)^2)``, so a tone ``B/2`` from
    centre is 3 dB down.
    """
    if abs(e.carrier_wavelength - p.center_wavelength) > REJECT_BANDWIDTHS * p.bandwidth_3db:
        return e.replace(np.zeros_like(e.samples))
    bw = p.bandwidth_hz
    # baseband bin f sits at optical frequency nu_carrier + f
    offset = _optical_frequency(e.carrier_wavelength) - _optical_frequency(p.center_wavelength)
    f = np.fft.fftfreq(e.grid.n_samples, e.grid.dt) + offset
    h = np.exp(-2.0 * math.log(2.0) * (f / bw) ** 2)
    return e.replace(np.fft.ifft(np.fft.fft(e.samples) * h))


def apply_loss(e: OpticalEnvelope, loss_db: float) -> OpticalEnvelope:
    if loss_db < 0:
        raise ValueError("loss_db must be non-negative")
    return e.replace(e.samples * 10.0 ** (-loss_db / 20.0))


def photodetect(e: OpticalEnvelope | list[OpticalEnvelope], pd: PhotodiodeParams) -> ElectricalWaveform:
    """Square-law detection; several wavelength channels add in power."""
    channels = [e] if isinstance(e, OpticalEnvelope) else list(e)
    power = np.sum([ch.power for ch in channels], axis=0)
    return ElectricalWaveform(channels[0].grid, pd.responsivity * power)


def rf_spectrum(w: ElectricalWaveform, pd: PhotodiodeParams) -> RFSpectrum:
    """Tone powers delivered to the load, ``I_k^2 R / 2`` for each bin k > 0."""
    n = w.grid.n_samples
    x = np.fft.rfft(w.samples) / n
    amp = np.abs(x)
    p = np.empty_like(amp)
    p[0] = amp[0] ** 2 * pd.load
    p[1:] = 2.0 * amp[1:] ** 2 * pd.load  # (2|X|)^2 R / 2
    if n % 2 == 0:
        p[-1] = amp[-1] ** 2 * pd.load  # Nyquist bin has no mirror image
    powers = _to_dbm(p)
    return RFSpectrum(bin_spacing=w.grid.bin_spacing, powers=powers, dc_power=float(powers[0]))


def parseval_error(w: ElectricalWaveform, spec: RFSpectrum, pd: PhotodiodeParams) -> float:
    """Relative mismatch between time-domain and summed spectral power."""
    time_power = float(np.mean(w.samples**2) * pd.load)
    if time_power == 0.0:
        return 0.0
    return abs(spec.total_power_w() - time_power) / time_power


def electrical_input_power(source: OpticalEnvelope, pd: PhotodiodeParams, f_if: float | None = None) -> float:
    """Detected power (dBm) of the sinusoidal data signal at ``f_if``.

    The source is detected as injected into the mixer, with no filter or loss.
    """
    grid: TimeGrid = source.grid
    f_if = grid.f_if if f_if is None else f_if
    grid.bin_index(f_if)
    return rf_spectrum(photodetect(source, pd), pd).power_at(f_if)


def detect(channels: list[OpticalEnvelope], filt: OBPFParams, loss_db: float, pd: PhotodiodeParams) -> ElectricalWaveform:
    """OBPF, lumped loss and photodetection of one output port."""
    passed = [apply_loss(obpf(ch, filt), loss_db) for ch in channels]
    return photodetect(passed, pd)
