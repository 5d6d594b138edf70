import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from soamix.soa import ConvergenceError, SOAParams, integrate_log_gain, propagate, steady_state_h
from soamix.signalgen import OpticalEnvelope, cw, gaussian_pulse_train, make_time_grid

P = SOAParams()


def bisect_h(params, p_in, tol=1e-13):
    """Plain bisection oracle on the fixed-point equation."""
    f = lambda h: (params.h0 - h) / params.tau_c - p_in / params.e_sat * (math.exp(h) - 1.0)
    lo, hi = 0.0, params.h0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if f(mid) > 0 else (lo, mid)
    return 0.5 * (lo + hi)


def test_defaults():
    assert P.h0 == pytest.approx(math.log(500))
    assert 10 * math.log10(math.exp(P.h0)) == pytest.approx(26.99, abs=0.01)


@pytest.mark.parametrize("kw", [dict(h0=0), dict(tau_c=0), dict(e_sat=-1), dict(alpha=-0.1)])
def test_param_validation(kw):
    with pytest.raises(ValueError):
        SOAParams(**kw)


def test_steady_state_limits():
    assert steady_state_h(P, 0.0) == P.h0
    assert steady_state_h(P, 1e3) < 1e-3


def test_steady_state_matches_bisection_oracle():
    h = steady_state_h(P, 100e-6)
    assert h == pytest.approx(bisect_h(P, 100e-6), abs=1e-12)
    resid = (P.h0 - h) / P.tau_c - 100e-6 / P.e_sat * math.expm1(h)
    assert abs(resid) < 1e-12 * P.h0 / P.tau_c


def test_steady_state_monotone_ladder():
    hs = [steady_state_h(P, p) for p in np.logspace(-7, -1, 10)]
    assert all(np.diff(hs) < 0)


def test_cw_propagate_equals_fixed_point(small_grid):
    for p in np.logspace(-6, -2, 10):
        (out,), tr = propagate(P, [cw(small_grid, 1557.4, p)])
        h_star = steady_state_h(P, p)
        assert np.ptp(tr.h) < 1e-9
        assert tr.h.mean() == pytest.approx(h_star, rel=1e-6)
        np.testing.assert_allclose(out.power, p * math.exp(h_star), rtol=1e-6)


def test_zero_input_is_unsaturated(small_grid):
    e = cw(small_grid, 1557.4, 0.0)
    (out,), tr = propagate(P, [e])
    np.testing.assert_array_equal(tr.h, P.h0)
    tone = e.replace(np.full(small_grid.n_samples, 1e-9 + 0j))
    (out, _), _ = propagate(P, [tone, e])
    assert out.power.mean() == pytest.approx(1e-18 * 500, rel=1e-6)


def test_zero_channel_is_transparent(small_grid):
    pulses = gaussian_pulse_train(small_grid, 1.3e-12, 1e-4)
    zero = cw(small_grid, 1557.4, 0.0)
    (a,), ta = propagate(P, [pulses])
    (b, _), tb = propagate(P, [pulses, zero])
    np.testing.assert_array_equal(ta.h, tb.h)
    np.testing.assert_array_equal(a.samples, b.samples)


def test_xpm_phase_sign(small_grid):
    (out,), tr = propagate(P, [cw(small_grid, 1557.4, 1e-4)])
    phase = np.angle(out.samples[0])
    assert phase == pytest.approx(math.remainder(-P.alpha * tr.h[0] / 2, 2 * math.pi), abs=1e-9)
    np.testing.assert_allclose(tr.phase(P.alpha), -P.alpha * tr.h / 2)


@settings(max_examples=15, deadline=None)
@given(mean_dbm=st.floats(-30, 5), fwhm=st.floats(1e-12, 20e-12), probe_dbm=st.floats(-40, 0))
def test_trace_bounds_and_energy(mean_dbm, fwhm, probe_dbm):
    grid = make_time_grid(10e9, 10e9, 2048)
    pump = gaussian_pulse_train(grid, fwhm, 1e-3 * 10 ** (mean_dbm / 10))
    probe = cw(grid, 1557.4, 1e-3 * 10 ** (probe_dbm / 10))
    outs, tr = propagate(P, [pump, probe])
    assert tr.h.min() >= 0 and tr.h.max() <= P.h0
    p_in = pump.mean_power + probe.mean_power
    assert sum(o.mean_power for o in outs) <= math.exp(P.h0) * p_in * (1 + 1e-12)


def test_modulation_bandwidth():
    grid = make_time_grid(10e9, 1e9, 8192)

    def excursion(f):
        p = 1e-3 * (1 + 0.5 * np.cos(2 * np.pi * f * grid.t))
        env = OpticalEnvelope(grid, np.sqrt(p).astype(complex), 1557.4)
        return np.ptp(propagate(P, [env])[1].h)

    assert excursion(10e9) < excursion(1e9)


def test_time_step_convergence():
    grid = make_time_grid(10e9, 1e9, 32768)

    def tones(g):
        pump = gaussian_pulse_train(g, 1.3e-12, 1e-3 * 10 ** (-10.5 / 10))
        p = 1e-4 * (1 + 0.8 * np.cos(2 * np.pi * 1e9 * g.t))
        probe = OpticalEnvelope(g, np.sqrt(p).astype(complex), 1557.4)
        (out, _), _ = propagate(P, [probe, pump])
        x = np.abs(np.fft.rfft(out.power)) / g.n_samples
        return 20 * np.log10(x[[1, 9, 10, 11, 19, 20]])

    np.testing.assert_allclose(tones(grid), tones(grid.with_samples(65536)), atol=0.01)


def test_non_convergence_reports_residual(small_grid):
    slow = SOAParams(tau_c=1e-8)
    pulses = gaussian_pulse_train(small_grid, 1.3e-12, 1e-2)
    with pytest.raises(ConvergenceError, match="residual"):
        integrate_log_gain(slow, pulses.power, small_grid.dt, max_windows=2)
