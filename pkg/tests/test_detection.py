import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.constants import c

from soamix.detection import (FLOOR_DBM, OBPFParams, PhotodiodeParams, RFSpectrum, apply_loss, detect,
                              electrical_input_power, obpf, parseval_error, photodetect, rf_spectrum)
from soamix.harness.oracle import compare_spectra, ideal_sampler_oracle
from soamix.signalgen import ElectricalWaveform, GridError, cw, gaussian_pulse_train, make_time_grid, mzm_modulated_cw

GRID = make_time_grid(10e9, 1e9, 32768)
PD = PhotodiodeParams()


def test_obpf_bandwidth_in_hz():
    assert OBPFParams(1550.0, 0.56).bandwidth_hz == pytest.approx(69.9e9, rel=2e-3)


def test_obpf_rejects_far_channel():
    out = obpf(cw(GRID, 1550.0, 1e-3), OBPFParams(1557.4, 0.56))
    assert not np.any(out.samples)


def test_obpf_unity_at_centre():
    e = cw(GRID, 1557.4, 1e-3)
    np.testing.assert_allclose(obpf(e, OBPFParams(1557.4, 0.56)).power, 1e-3, rtol=1e-12)


def test_obpf_half_bandwidth_is_3db():
    f = OBPFParams(1557.4, 0.56)
    nu = c / 1557.4e-9 + f.bandwidth_hz / 2
    e = cw(GRID, c / nu * 1e9, 1e-3)
    ratio = obpf(e, f).mean_power / e.mean_power
    assert 10 * math.log10(ratio) == pytest.approx(-3.0103, abs=1e-4)


def test_apply_loss_examples():
    e = cw(GRID, 1557.4, 1e-3)
    assert apply_loss(e, 5.6).mean_power == pytest.approx(0.2754e-3, rel=2e-4)
    np.testing.assert_array_equal(apply_loss(e, 0.0).samples, e.samples)
    assert apply_loss(e, 10 * math.log10(2)).mean_power == pytest.approx(0.5e-3, rel=1e-12)
    with pytest.raises(ValueError):
        apply_loss(e, -1.0)


def test_photodetect_examples():
    np.testing.assert_allclose(photodetect(cw(GRID, 1557.4, 1e-3), PD).samples, 1e-3, rtol=1e-14)
    assert not np.any(photodetect(cw(GRID, 1557.4, 0.0), PD).samples)
    w = photodetect(mzm_modulated_cw(GRID, 1557.4, 1e-3, 0.4), PD)
    assert (w.samples.max() - w.samples.mean()) / w.samples.mean() == pytest.approx(0.4, abs=1e-12)


def test_photodetect_adds_channel_powers():
    a, b = cw(GRID, 1557.4, 1e-3), cw(GRID, 1550.0, 2e-3)
    np.testing.assert_allclose(photodetect([a, b], PD).samples, 3e-3, rtol=1e-14)


def test_rf_spectrum_tone_and_dc():
    spec = rf_spectrum(ElectricalWaveform(GRID, 1e-3 * np.cos(2 * np.pi * 9e9 * GRID.t)), PD)
    assert spec.power_at(9e9) == pytest.approx(-16.0206, abs=1e-4)
    spec = rf_spectrum(ElectricalWaveform(GRID, np.full(GRID.n_samples, 1e-3)), PD)
    assert spec.dc_power == pytest.approx(-13.0103, abs=1e-4)
    assert np.all(spec.powers[1:] == FLOOR_DBM)
    with pytest.raises(GridError):
        spec.power_at(9.5e8)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dc=st.floats(0, 1e-2))
def test_parseval_random(seed, dc):
    grid = make_time_grid(10e9, 1e9, 4096)
    rng = np.random.default_rng(seed)
    w = ElectricalWaveform(grid, dc + 1e-3 * rng.normal(size=grid.n_samples))
    assert parseval_error(w, rf_spectrum(w, PD), PD) < 1e-9


def test_sampled_sinusoid_matches_oracle():
    mean = 1e-3
    pulses = gaussian_pulse_train(GRID, 1.3e-12, 1.0).power
    i = PD.responsivity * pulses / pulses.mean() * mean * (1 + 0.6 * np.cos(2 * np.pi * 1e9 * GRID.t))
    spec = rf_spectrum(ElectricalWaveform(GRID, i), PD)
    ref = ideal_sampler_oracle(1.3e-12, 10e9, 1e9, 0.6, mean, PD, GRID)
    assert compare_spectra(spec, ref)[0] < 0.1


def test_electrical_input_power():
    assert electrical_input_power(mzm_modulated_cw(GRID, 1557.4, 1e-3, 0.0), PD) == FLOOR_DBM
    p0, m = 50e-6, 0.7
    expected = 10 * math.log10((PD.responsivity * p0 * m) ** 2 * PD.load / 2 / 1e-3)
    assert electrical_input_power(mzm_modulated_cw(GRID, 1557.4, p0, m), PD) == pytest.approx(expected, abs=1e-9)
    a = electrical_input_power(mzm_modulated_cw(GRID, 1557.4, p0, 0.3), PD)
    b = electrical_input_power(mzm_modulated_cw(GRID, 1557.4, p0, 0.6), PD)
    assert b - a == pytest.approx(6.0206, abs=1e-4)
    with pytest.raises(GridError):
        electrical_input_power(mzm_modulated_cw(GRID, 1557.4, p0, 0.3), PD, f_if=1.5e8)


def test_loss_and_filter_commute():
    e = gaussian_pulse_train(GRID, 1.3e-12, 1e-3, 1557.4)
    f = OBPFParams(1557.4, 0.56)
    a = photodetect(apply_loss(obpf(e, f), 5.6), PD).samples
    b = photodetect(obpf(apply_loss(e, 5.6), f), PD).samples
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12 * a.max())


def test_detected_comb_is_bin_exact():
    e = gaussian_pulse_train(GRID, 1.3e-12, 1e-3, 1557.4)
    spec = rf_spectrum(detect([e, cw(GRID, 1550.0, 1e-3)], OBPFParams(), 5.6, PD), PD)
    off = np.delete(spec.powers, np.arange(0, spec.powers.size, 10))
    assert off.max() < spec.powers[1:].max() - 200


def test_spectrum_csv(tmp_path):
    spec = rf_spectrum(ElectricalWaveform(GRID, 1e-3 * np.cos(2 * np.pi * 9e9 * GRID.t)), PD)
    path = tmp_path / "s.csv"
    spec.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "freq_hz,power_dbm"
    assert len(lines) == 1 + 46
    assert lines[10].startswith("9000000000.0,-16.0206")


def test_spectrum_floor_marker():
    s = RFSpectrum(1e9, np.array([FLOOR_DBM, -10.0]), FLOOR_DBM)
    assert s.total_power_w() == pytest.approx(1e-4, rel=1e-12)
