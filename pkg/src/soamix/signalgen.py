"""Time grid and optical source synthesis.

Every waveform in the package lives on a periodic :class:`TimeGrid` whose
window is the common period of the sampling train and the data tone, so each
tone of interest ``n*f_rep +/- k*f_if`` falls exactly on a DFT bin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

LN2 = math.log(2.0)
# Gaussian FWHM -> energy: integral of exp(-4 ln2 t^2 / w^2) dt = w * sqrt(pi / (4 ln2))
GAUSS_AREA = math.sqrt(math.pi / (4.0 * LN2))
# Narrowest pulse must span at least this many samples at FWHM.
MIN_SAMPLES_PER_FWHM = 16
_MAX_DENOMINATOR = 1000


class GridError(ValueError):
    """Frequencies or resolution incompatible with a commensurate grid."""


@dataclass(frozen=True)
class TimeGrid:
    n_samples: int
    dt: float
    window: float
    f_rep: float
    f_if: float

    @property
    def t(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.dt

    @property
    def bin_spacing(self) -> float:
        return 1.0 / self.window

    def bin_index(self, freq: float) -> int:
        """DFT bin holding ``freq``; raises if ``freq`` is not bin-aligned."""
        k = freq * self.window
        kr = round(k)
        if abs(k - kr) > 1e-6 or kr < 0:
            raise GridError(f"{freq:g} Hz is not on a bin of a {self.window:g} s window")
        return int(kr)

    def check_resolution(self, fwhm: float) -> None:
        if self.dt > fwhm / MIN_SAMPLES_PER_FWHM:
            raise GridError(
                f"dt = {self.dt:.4g} s is too coarse for a {fwhm:.4g} s FWHM pulse "
                f"(need dt <= FWHM/{MIN_SAMPLES_PER_FWHM})"
            )

    def samples_for(self, duration: float) -> int:
        """Integer number of samples in ``duration``; raises unless exact."""
        k = duration / self.dt
        kr = round(k)
        if abs(k - kr) > 1e-6 * max(1.0, abs(k)):
            raise GridError(f"{duration:g} s is not an integer multiple of dt = {self.dt:g} s")
        return int(kr)

    def with_samples(self, n_samples: int) -> "TimeGrid":
        return make_time_grid(self.f_rep, self.f_if, n_samples)


@dataclass(frozen=True, eq=False)
class OpticalEnvelope:
    """Complex baseband field in sqrt(W); ``|samples|**2`` is power in W."""

    grid: TimeGrid
    samples: np.ndarray
    carrier_wavelength: float  # nm

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.shape != (self.grid.n_samples,):
            raise ValueError(f"expected {self.grid.n_samples} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("envelope contains non-finite samples")
        object.__setattr__(self, "samples", s)

    @property
    def power(self) -> np.ndarray:
        return np.abs(self.samples) ** 2

    @property
    def mean_power(self) -> float:
        return float(np.mean(self.power))

    def replace(self, samples: np.ndarray) -> "OpticalEnvelope":
        return OpticalEnvelope(self.grid, samples, self.carrier_wavelength)


@dataclass(frozen=True, eq=False)
class ElectricalWaveform:
    """Photocurrent samples in A."""

    grid: TimeGrid
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        if s.shape != (self.grid.n_samples,):
            raise ValueError(f"expected {self.grid.n_samples} samples, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("waveform contains non-finite samples")
        object.__setattr__(self, "samples", s)


def dbm_to_w(p_dbm: float) -> float:
    return 1e-3 * 10.0 ** (p_dbm / 10.0)


def w_to_dbm(p_w: float) -> float:
    return 10.0 * math.log10(p_w / 1e-3)


def _as_fraction(x: float) -> Fraction:
    return Fraction(x).limit_denominator(_MAX_DENOMINATOR)


def make_time_grid(f_rep: float, f_if: float, n_samples: int = 32768) -> TimeGrid:
    """Smallest window holding an integer number of both periods.

    The window is ``1/gcd(f_rep, f_if)``, found through the rational ratio
    ``f_rep/f_if`` (denominator capped at 1000).
    """
    if f_rep <= 0 or f_if <= 0:
        raise GridError("frequencies must be positive")
    if n_samples < 2 or n_samples & (n_samples - 1):
        raise GridError(f"n_samples must be a power of two, got {n_samples}")
    ratio = _as_fraction(f_rep / f_if)
    if abs(float(ratio) - f_rep / f_if) > 1e-9 * (f_rep / f_if):
        raise GridError(
            f"f_rep = {f_rep:g} Hz and f_if = {f_if:g} Hz are not commensurate "
            f"(no rational ratio with denominator <= {_MAX_DENOMINATOR})"
        )
    # f_rep = p*g and f_if = q*g with p/q in lowest terms, so g = f_if / q
    f_common = f_if / ratio.denominator
    window = 1.0 / f_common
    return TimeGrid(n_samples=n_samples, dt=window / n_samples, window=window, f_rep=f_rep, f_if=f_if)


def gaussian_pulse_train(grid: TimeGrid, fwhm: float, mean_power: float, carrier: float = 1550.0) -> OpticalEnvelope:
    """Periodic train of Gaussian power pulses at ``grid.f_rep``.

    Pulses are centred on ``k/f_rep`` and summed over neighbouring periods so
    the window wraps without a seam. The profile is rescaled so its time
    average is exactly ``mean_power``.
    """
    if mean_power <= 0:
        raise ValueError("mean_power must be positive")
    grid.check_resolution(fwhm)
    t = grid.t
    t_rep = 1.0 / grid.f_rep
    n_per = round(grid.window * grid.f_rep)
    # images far enough out that the Gaussian tail is below double precision
    reach = int(math.ceil(8.0 * fwhm / t_rep)) + 1
    profile = np.zeros_like(t)
    for k in range(-reach, n_per + reach):
        profile += np.exp(-4.0 * LN2 * ((t - k * t_rep) / fwhm) ** 2)
    power = profile * (mean_power / profile.mean())
    return OpticalEnvelope(grid, np.sqrt(power).astype(complex), carrier)


def pulse_peak_power(mean_power: float, fwhm: float, f_rep: float) -> float:
    """Peak power of a Gaussian train with the given average power."""
    return mean_power / (f_rep * fwhm * GAUSS_AREA)


def mzm_modulated_cw(grid: TimeGrid, carrier: float, mean_power: float, m: float, f_if: float | None = None) -> OpticalEnvelope:
    """CW carrier through an ideal linear intensity modulator.

    ``P(t) = mean_power * (1 + m cos(2 pi f_if t))``; the field is its square root.
    """
    if not 0.0 <= m <= 1.0:
        raise ValueError(f"modulation depth must lie in [0, 1], got {m}")
    if mean_power < 0:
        raise ValueError("mean_power must be non-negative")
    f_if = grid.f_if if f_if is None else f_if
    grid.bin_index(f_if)
    p = mean_power * (1.0 + m * np.cos(2.0 * np.pi * f_if * grid.t))
    return OpticalEnvelope(grid, np.sqrt(np.maximum(p, 0.0)).astype(complex), carrier)


def cw(grid: TimeGrid, carrier: float, power: float) -> OpticalEnvelope:
    if power < 0:
        raise ValueError("power must be non-negative")
    return OpticalEnvelope(grid, np.full(grid.n_samples, math.sqrt(power), dtype=complex), carrier)
