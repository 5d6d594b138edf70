"""Lumped rate-equation model of a semiconductor optical amplifier.

The state is the integrated log-gain ``h(t)`` (power gain ``exp(h)``), driven
by the total optical power injected into the device:

    dh/dt = (h0 - h)/tau_c - (P_tot(t)/E_sat) * (exp(h) - 1)

Every co-propagating channel sees the same gain, and picks up the XPM phase
``-alpha*h/2`` through the field factor ``exp((1 - j*alpha) * h / 2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np
from scipy.optimize import brentq

from .signalgen import OpticalEnvelope, TimeGrid


class ConvergenceError(RuntimeError):
    """Periodic steady state not reached within the warm-up cap."""


@dataclass(frozen=True)
class SOAParams:
    h0: float = math.log(500.0)
    tau_c: float = 100e-12
    e_sat: float = 5e-12
    alpha: float = 5.0

    def __post_init__(self):
        if self.h0 <= 0 or self.tau_c <= 0 or self.e_sat <= 0:
            raise ValueError("h0, tau_c and e_sat must be positive")
        if self.alpha < 0:
            raise ValueError("alpha must be non-negative")

    @property
    def p_sat(self) -> float:
        """Saturation power E_sat / tau_c in W."""
        return self.e_sat / self.tau_c


@dataclass(frozen=True, eq=False)
class SOATrace:
    grid: TimeGrid
    h: np.ndarray

    @property
    def gain(self) -> np.ndarray:
        return np.exp(self.h)

    def phase(self, alpha: float) -> np.ndarray:
        """XPM phase ``-alpha*h/2`` in rad."""
        return -alpha * self.h / 2.0


def _residual(h, h0, tau_c, e_sat, p_in):
    return (h0 - h) / tau_c - (p_in / e_sat) * math.expm1(h)


def steady_state_h(params: SOAParams, p_in: float) -> float:
    """CW fixed point of the rate equation for input power ``p_in`` (W).

    The left side decreases and the right side increases in ``h``, so the root
    in ``(0, h0]`` is unique.
    """
    if p_in < 0:
        raise ValueError("p_in must be non-negative")
    if p_in == 0:
        return params.h0
    args = (params.h0, params.tau_c, params.e_sat, p_in)
    # _residual(0) = h0/tau_c > 0 always, and _residual(h0) < 0 for p_in > 0
    return brentq(_residual, 0.0, params.h0, args=args, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)


@numba.njit(cache=True)
def _rk4_window(p_tot, h_start, h0, tau_c, e_sat, dt):
    """One periodic window of classical RK4; returns (h samples, h after window).

    P_tot is linearly interpolated at half steps; the sample after the last
    wraps to the first.
    """
    n = p_tot.size
    h = np.empty(n)
    x = h_start
    inv_tau = 1.0 / tau_c
    inv_esat = 1.0 / e_sat
    for k in range(n):
        h[k] = x
        p0 = p_tot[k]
        p1 = p_tot[k + 1] if k + 1 < n else p_tot[0]
        pm = 0.5 * (p0 + p1)
        k1 = (h0 - x) * inv_tau - p0 * inv_esat * math.expm1(x)
        y = x + 0.5 * dt * k1
        k2 = (h0 - y) * inv_tau - pm * inv_esat * math.expm1(y)
        y = x + 0.5 * dt * k2
        k3 = (h0 - y) * inv_tau - pm * inv_esat * math.expm1(y)
        y = x + dt * k3
        k4 = (h0 - y) * inv_tau - p1 * inv_esat * math.expm1(y)
        x = x + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
    return h, x


def integrate_log_gain(params: SOAParams, p_tot: np.ndarray, dt: float, max_windows: int = 50) -> np.ndarray:
    """Periodic steady-state ``h(t)`` for a periodic total-power drive.

    Warm-up starts from the CW fixed point of the mean power and repeats the
    window until the start and end values agree to ``1e-9 * h0``.
    """
    p_tot = np.ascontiguousarray(p_tot, dtype=float)
    x = steady_state_h(params, float(p_tot.mean()))
    tol = 1e-9 * params.h0
    residual = math.inf
    for _ in range(max_windows):
        h, x_end = _rk4_window(p_tot, x, params.h0, params.tau_c, params.e_sat, dt)
        residual = abs(x_end - x)
        x = x_end
        if residual < tol:
            return h
    raise ConvergenceError(
        f"SOA did not reach periodic steady state in {max_windows} windows "
        f"(final residual {residual:.3e}, tolerance {tol:.3e})"
    )


def propagate(params: SOAParams, inputs: list[OpticalEnvelope], max_windows: int = 50) -> tuple[list[OpticalEnvelope], SOATrace]:
    """Amplify all channels through one SOA sharing a common gain state."""
    if not inputs:
        raise ValueError("propagate needs at least one input")
    grid = inputs[0].grid
    if any(e.grid != grid for e in inputs):
        raise ValueError("all SOA inputs must share one time grid")
    p_tot = np.sum([e.power for e in inputs], axis=0)
    h = integrate_log_gain(params, p_tot, grid.dt, max_windows)
    factor = np.exp((1.0 - 1j * params.alpha) * h / 2.0)
    outputs = [e.replace(e.samples * factor) for e in inputs]
    return outputs, SOATrace(grid, h)
