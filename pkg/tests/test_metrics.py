import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from soamix.detection import FLOOR_DBM, PhotodiodeParams, RFSpectrum, rf_spectrum
from soamix.harness.oracle import comb_coefficient, linearized_spectrum
from soamix.metrics import (REPORT_COLUMNS, conversion_gain, hd2, hd3, make_report, modulation_index,
                            thd, write_reports_csv)
from soamix.mzi import Architecture
from soamix.pipeline import Bench, OperatingPoint, simulate_cell
from soamix.signalgen import ElectricalWaveform, gaussian_pulse_train, make_time_grid

GRID = make_time_grid(10e9, 1e9, 32768)
PD = PhotodiodeParams()


def spectrum_from(tones: dict[float, float]) -> RFSpectrum:
    p = np.full(46, FLOOR_DBM)
    for f, v in tones.items():
        p[int(round(f / 1e9))] = v
    return RFSpectrum(1e9, p, p[0])


def wave(y):
    return ElectricalWaveform(GRID, y)


def test_modulation_index_examples():
    c = np.cos(2 * np.pi * 1e9 * GRID.t)
    assert modulation_index(wave(1 + 0.5 * c)) == pytest.approx(0.5, abs=1e-12)
    assert modulation_index(wave(np.ones(GRID.n_samples))) == 0.0
    assert modulation_index(wave(1 + c)) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        modulation_index(wave(np.zeros(GRID.n_samples)))


def test_conversion_gain_examples():
    assert conversion_gain(-10, -30) == 20
    assert conversion_gain(-12.5, -12.5) == 0
    with pytest.raises(ValueError):
        conversion_gain(math.inf, -30)


def test_hd_definitions():
    s = spectrum_from({9e9: -20.0, 8e9: -30.0, 7e9: -45.0})
    assert hd2(s, 10e9, 1e9) == pytest.approx(-10.0)
    assert hd3(s, 10e9, 1e9) == pytest.approx(-25.0)
    with pytest.raises(Exception):
        hd2(s, 10e9, 0.75e9)


def test_thd_examples():
    assert thd(spectrum_from({9e9: -20, 8e9: -20, 7e9: -20}), 10e9, 1e9) == pytest.approx(10 * math.log10(2), abs=1e-9)
    assert thd(spectrum_from({9e9: -20}), 10e9, 1e9) < -250
    with pytest.raises(ValueError):
        thd(spectrum_from({8e9: -20}), 10e9, 1e9)


@settings(max_examples=50, deadline=None)
@given(p9=st.floats(-80, 0), p8=st.floats(-150, 0), p7=st.floats(-150, 0))
def test_thd_identity(p9, p8, p7):
    s = spectrum_from({9e9: p9, 8e9: p8, 7e9: p7})
    lhs = 10 ** (thd(s, 10e9, 1e9) / 10)
    rhs = 10 ** (hd2(s, 10e9, 1e9) / 10) + 10 ** (hd3(s, 10e9, 1e9) / 10)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_ideal_multiplication_has_no_hd2():
    spec = linearized_spectrum(Bench(), 0.8, 1e-3)
    assert hd2(spec, 10e9, 1e9) < -200


def _clipped_coefficient(k, m, level):
    """Two-sided Fourier coefficient k of min(1 + m cos x, level), closed form."""
    xc = math.acos((level - 1) / m)
    k = abs(k)
    # coefficients of the removed cap m (cos x - cos xc) on |x| < xc
    if k == 0:
        cap = m * (math.sin(xc) - xc * math.cos(xc)) / math.pi
    elif k == 1:
        cap = m * (xc / 2 + math.sin(2 * xc) / 4 - math.cos(xc) * math.sin(xc)) / math.pi
    else:
        cap = m * (math.sin((k - 1) * xc) / (2 * (k - 1)) + math.sin((k + 1) * xc) / (2 * (k + 1))
                   - math.cos(xc) * math.sin(k * xc) / k) / math.pi
    base = {0: 1.0, 1: m / 2}.get(k, 0.0)
    return base - cap


def test_clipped_coefficients_against_quadrature():
    m, level = 0.9, 1.5
    xc = math.acos((level - 1) / m)
    for k in range(6):
        num = quad(lambda x: min(1 + m * math.cos(x), level) * math.cos(k * x), 0, math.pi, points=[xc])[0] / math.pi
        assert _clipped_coefficient(k, m, level) == pytest.approx(num, abs=1e-12)


def test_clipped_sampler_harmonics_match_fourier_oracle():
    m, level, mean = 0.9, 1.5, 1e-3

    def phasor(f):  # f in GHz; sum over comb lines n of c_n * S_(f - 10 n)
        return sum(comb_coefficient(n, mean, 1.3e-12, 10e9) * _clipped_coefficient(f - 10 * n, m, level)
                   for n in range(-200, 201))

    ref_hd2 = 20 * math.log10(abs(phasor(8)) / abs(phasor(9)))
    ref_hd3 = 20 * math.log10(abs(phasor(7)) / abs(phasor(9)))
    g = gaussian_pulse_train(GRID, 1.3e-12, mean).power
    drive = np.minimum(1 + m * np.cos(2 * np.pi * 1e9 * GRID.t), level)
    spec = rf_spectrum(wave(PD.responsivity * g * drive), PD)
    assert hd2(spec, 10e9, 1e9) == pytest.approx(ref_hd2, abs=0.01)
    assert hd3(spec, 10e9, 1e9) == pytest.approx(ref_hd3, abs=0.01)


def test_gain_invariant_under_responsivity_scaling():
    op = replace(OperatingPoint(), odl_delay=None)
    a = simulate_cell(Bench(), Architecture.SWITCHING_STANDARD, 0.6, op).report
    b = simulate_cell(replace(Bench(), photodiode=PhotodiodeParams(responsivity=2.0)),
                      Architecture.SWITCHING_STANDARD, 0.6, op).report
    assert b.p_in_1ghz_dbm - a.p_in_1ghz_dbm == pytest.approx(20 * math.log10(2), abs=1e-9)
    assert b.gc_up_db - a.gc_up_db == pytest.approx(0.0, abs=1e-9)


def test_report_and_csv(tmp_path):
    s = spectrum_from({9e9: -20.0, 8e9: -30.0, 7e9: -45.0, 11e9: -20.0, 12e9: -31.0, 13e9: -46.0})
    r = make_report("modulation", 0.5, s, -40.0, 10e9, 1e9, loss_db=5.6)
    assert r.p_out_9ghz_dbm == pytest.approx(-20.0 + 11.2)
    assert r.gc_up_db == pytest.approx(31.2)
    assert r.hd2_upper_db == pytest.approx(-11.0)
    path = tmp_path / "r.csv"
    write_reports_csv([r], path)
    head, row = path.read_text().splitlines()
    assert head == ",".join(REPORT_COLUMNS)
    assert row.split(",")[:2] == ["modulation", "0.5"]
    assert len(row.split(",")) == len(REPORT_COLUMNS)
