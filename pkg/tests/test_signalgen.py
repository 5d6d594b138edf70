import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from soamix.harness.oracle import comb_coefficient
from soamix.metrics import modulation_index
from soamix.signalgen import (GridError, ElectricalWaveform, OpticalEnvelope, cw, gaussian_pulse_train,
                              make_time_grid, mzm_modulated_cw, pulse_peak_power)

GRID = make_time_grid(10e9, 1e9, 32768)


def test_default_grid():
    assert GRID.window == pytest.approx(1e-9, rel=1e-15)
    assert GRID.dt == pytest.approx(1e-9 / 32768, rel=1e-15)
    assert GRID.dt == pytest.approx(30.52e-15, rel=1e-3)
    assert GRID.n_samples * GRID.dt == GRID.window


def test_equal_frequencies_grid():
    assert make_time_grid(10e9, 10e9, 1024).window == pytest.approx(100e-12, rel=1e-15)


def test_gcd_grid():
    g = make_time_grid(10e9, 3e9, 32768)
    assert g.window == pytest.approx(1e-9, rel=1e-12)
    # whole periods of both tones fit the window
    assert g.window * g.f_rep == pytest.approx(10.0)
    assert g.window * g.f_if == pytest.approx(3.0)


def test_grid_rejections():
    with pytest.raises(GridError, match="commensurate"):
        make_time_grid(10e9, math.pi * 1e9)
    with pytest.raises(GridError, match="power of two"):
        make_time_grid(10e9, 1e9, 30000)
    coarse = make_time_grid(10e9, 1e9, 1024)
    with pytest.raises(GridError, match="1.3e-12"):
        gaussian_pulse_train(coarse, 1.3e-12, 1e-3)


def test_bin_lookup():
    assert GRID.bin_index(9e9) == 9
    with pytest.raises(GridError):
        GRID.bin_index(9.5e8)


def test_pulse_peak_power_closed_form_and_numeric():
    mean = 1e-3 * 10 ** (-15 / 10)
    peak = pulse_peak_power(mean, 1.3e-12, 10e9)
    assert peak == pytest.approx(2.285e-3, rel=5e-4)
    # numerical energy of the synthesized profile over one period
    fine = make_time_grid(10e9, 10e9, 8192)
    p = gaussian_pulse_train(fine, 1.3e-12, mean).power
    energy = np.sum(p) * fine.dt
    assert energy == pytest.approx(mean / 10e9, rel=1e-9)
    # pulse centred on sample 0, so the sampled maximum is the peak
    assert p.max() == pytest.approx(peak, rel=1e-9)


def test_pulse_mean_exact_and_refinement_stable():
    mean = 31.62e-6
    a = gaussian_pulse_train(GRID, 1.3e-12, mean).mean_power
    b = gaussian_pulse_train(GRID.with_samples(65536), 1.3e-12, mean).mean_power
    assert a == pytest.approx(mean, rel=1e-12)
    assert b == pytest.approx(a, rel=1e-6)


def test_wide_pulse_tends_to_cw(small_grid):
    ratios = []
    for fwhm in (10e-12, 50e-12, 100e-12, 200e-12):
        p = gaussian_pulse_train(small_grid, fwhm, 1e-3).power
        ratios.append(p.max() / p.mean())
    assert all(np.diff(ratios) < 0)
    assert ratios[-1] < 1.0 + 1e-5


def test_pulse_train_fourier_coefficients():
    mean = 1e-3
    p = gaussian_pulse_train(GRID, 1.3e-12, mean).power
    x = np.fft.fft(p) / p.size
    for n in range(-4, 5):
        c = abs(x[(n * 10) % p.size])
        ref = comb_coefficient(n, mean, 1.3e-12, 10e9)
        assert abs(10 * np.log10(c / ref)) < 0.01


def test_pulse_train_only_on_comb_bins():
    p = gaussian_pulse_train(GRID, 1.3e-12, 1e-3).power
    x = np.abs(np.fft.rfft(p))
    off = np.ones(x.size, bool)
    off[::10] = False
    assert 20 * np.log10(x[off].max() / x.max()) < -200


def test_mzm_examples():
    e = mzm_modulated_cw(GRID, 1557.4, 1e-3, 0.0)
    np.testing.assert_allclose(e.power, 1e-3, rtol=1e-14)
    e = mzm_modulated_cw(GRID, 1557.4, 1e-3, 1.0)
    assert e.power.min() == pytest.approx(0.0, abs=1e-18)
    assert e.power.max() == pytest.approx(2e-3, rel=1e-14)
    e = mzm_modulated_cw(GRID, 1557.4, 100e-6, 0.5)
    assert e.power.min() == pytest.approx(50e-6, rel=1e-12)
    assert e.power.max() == pytest.approx(150e-6, rel=1e-12)
    assert e.mean_power == pytest.approx(100e-6, rel=1e-12)


@pytest.mark.parametrize("m", [-0.1, 1.01])
def test_mzm_rejects_overmodulation(m):
    with pytest.raises(ValueError):
        mzm_modulated_cw(GRID, 1557.4, 1e-3, m)


@settings(max_examples=30, deadline=None)
@given(m=st.floats(0.01, 1.0), mean=st.floats(1e-6, 1e-2))
def test_mzm_mean_and_index_round_trip(m, mean):
    e = mzm_modulated_cw(GRID, 1557.4, mean, m)
    assert e.mean_power == pytest.approx(mean, rel=1e-12)
    assert modulation_index(ElectricalWaveform(GRID, e.power)) == pytest.approx(m, abs=1e-9)


def test_cw_examples():
    assert not np.any(cw(GRID, 1557.4, 0.0).samples)
    np.testing.assert_allclose(cw(GRID, 1557.4, 1e-3).power, 1e-3, rtol=1e-14)
    np.testing.assert_array_equal(cw(GRID, 1557.4, 2e-4).samples, mzm_modulated_cw(GRID, 1557.4, 2e-4, 0.0).samples)


def test_envelope_validation():
    with pytest.raises(ValueError):
        OpticalEnvelope(GRID, np.zeros(10), 1550.0)
    bad = np.zeros(GRID.n_samples, complex)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        OpticalEnvelope(GRID, bad, 1550.0)
