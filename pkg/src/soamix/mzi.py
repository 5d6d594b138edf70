"""SOA-MZI wiring for the Switching and Modulation sampler architectures.

Ports follow the usual SOA-MZI naming: A and D are the control inputs of the
upper and lower SOA, C is the interferometric input, I and J are the outputs.
Couplers use the symmetric ``(1, j)/sqrt(2)`` convention; a lumped phase
shifter on the lower arm sets the operating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .signalgen import OpticalEnvelope, dbm_to_w
from .soa import SOAParams, SOATrace, propagate, steady_state_h

SQRT_HALF = math.sqrt(0.5)
TWO_PI = 2.0 * math.pi
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Architecture(str, enum.Enum):
    SWITCHING_STANDARD = "switching_standard"
    SWITCHING_DIFFERENTIAL = "switching_differential"
    MODULATION = "modulation"

    @property
    def is_switching(self) -> bool:
        return self is not Architecture.MODULATION


@dataclass(frozen=True)
class ArchitectureConfig:
    """Operating point of one architecture.

    ``port_powers`` maps port letters to mean power in dBm. In the
    differential case, port D receives the delayed pump rescaled to
    ``port_powers["D"]`` when both A and D are given.
    """

    kind: Architecture
    bias_phase: float = 0.0
    odl_delay: float | None = None
    port_powers: dict = field(default_factory=dict)

    def __post_init__(self):
        kind = Architecture(self.kind)
        object.__setattr__(self, "kind", kind)
        differential = kind is Architecture.SWITCHING_DIFFERENTIAL
        if differential != (self.odl_delay is not None):
            raise ValueError("odl_delay must be given exactly for the differential configuration")
        object.__setattr__(self, "bias_phase", float(self.bias_phase) % TWO_PI)


@dataclass(frozen=True, eq=False)
class MixerOutput:
    port_i: OpticalEnvelope
    port_j: OpticalEnvelope
    traces: tuple[SOATrace, SOATrace]
    # control light leaving through each output port; removed by the OBPF
    pump_i: list[OpticalEnvelope] = field(default_factory=list)
    pump_j: list[OpticalEnvelope] = field(default_factory=list)

    def channels(self, port: str = "I") -> list[OpticalEnvelope]:
        if port.upper() == "I":
            return [self.port_i, *self.pump_i]
        return [self.port_j, *self.pump_j]


def _check_pair(e1: OpticalEnvelope, e2: OpticalEnvelope) -> None:
    if e1.grid != e2.grid:
        raise ValueError("coupler inputs are on different time grids")


def coupler_2x2(e1: OpticalEnvelope, e2: OpticalEnvelope) -> tuple[OpticalEnvelope, OpticalEnvelope]:
    """Lossless 3-dB coupler: o1 = (e1 + j e2)/sqrt2, o2 = (j e1 + e2)/sqrt2."""
    _check_pair(e1, e2)
    if e1.carrier_wavelength != e2.carrier_wavelength and np.any(e1.samples) and np.any(e2.samples):
        raise ValueError("coupler inputs carry different wavelengths")
    carrier = e1.carrier_wavelength if np.any(e1.samples) or not np.any(e2.samples) else e2.carrier_wavelength
    a, b = e1.samples, e2.samples
    o1 = OpticalEnvelope(e1.grid, SQRT_HALF * (a + 1j * b), carrier)
    o2 = OpticalEnvelope(e1.grid, SQRT_HALF * (1j * a + b), carrier)
    return o1, o2


def apply_delay(e: OpticalEnvelope, delay: float) -> OpticalEnvelope:
    """Circular shift by ``delay``; must be a whole number of samples."""
    shift = e.grid.samples_for(delay)
    return e.replace(np.roll(e.samples, shift))


def apply_phase(e: OpticalEnvelope, phase: float) -> OpticalEnvelope:
    return e.replace(e.samples * np.exp(1j * phase))


def _zero_like(e: OpticalEnvelope) -> OpticalEnvelope:
    return e.replace(np.zeros_like(e.samples))


def _scaled(e: OpticalEnvelope, power_ratio: float) -> OpticalEnvelope:
    return e.replace(e.samples * math.sqrt(power_ratio))


def run_mixer(arch: ArchitectureConfig, pump: OpticalEnvelope, probe: OpticalEnvelope,
              soa_up: SOAParams, soa_low: SOAParams) -> MixerOutput:
    """Propagate one periodic window through the SOA-MZI.

    ``pump`` is the signal entering port A (the pulse train for Switching, the
    sinusoid for Modulation) and ``probe`` enters port C. The pump contributes
    saturating power only; it is not interfered at the output coupler.
    """
    if pump.grid != probe.grid:
        raise ValueError("pump and probe are on different time grids")
    if pump.carrier_wavelength == probe.carrier_wavelength:
        raise ValueError(
            f"pump and probe share {pump.carrier_wavelength} nm; the output filter cannot separate them"
        )
    arm_up, arm_low = coupler_2x2(probe, _zero_like(probe))

    pump_up = [pump]
    pump_low: list[OpticalEnvelope] = []
    if arch.kind is Architecture.SWITCHING_DIFFERENTIAL:
        delayed = apply_delay(pump, arch.odl_delay)
        pa, pd = arch.port_powers.get("A"), arch.port_powers.get("D")
        if pa is not None and pd is not None:
            delayed = _scaled(delayed, dbm_to_w(pd) / dbm_to_w(pa))
        pump_low = [delayed]

    (out_up, *pump_up_out), trace_up = propagate(soa_up, [arm_up, *pump_up])
    (out_low, *pump_low_out), trace_low = propagate(soa_low, [arm_low, *pump_low])
    out_low = apply_phase(out_low, arch.bias_phase)
    port_i, port_j = coupler_2x2(out_up, out_low)

    # pump light splits evenly over both outputs after the output coupler
    pumps = [_scaled(p, 0.5) for p in (*pump_up_out, *pump_low_out)]
    return MixerOutput(port_i, port_j, (trace_up, trace_low), pump_i=pumps, pump_j=list(pumps))


def static_port_powers(h_up: float, h_low: float, alpha_up: float, alpha_low: float,
                       probe_power: float, bias_phase: float) -> tuple[float, float]:
    """CW powers at ports I and J for fixed arm log-gains."""
    a_up = math.sqrt(probe_power / 2.0) * np.exp((1.0 - 1j * alpha_up) * h_up / 2.0)
    a_low = 1j * math.sqrt(probe_power / 2.0) * np.exp((1.0 - 1j * alpha_low) * h_low / 2.0) * np.exp(1j * bias_phase)
    e_i = SQRT_HALF * (a_up + 1j * a_low)
    e_j = SQRT_HALF * (1j * a_up + a_low)
    return float(abs(e_i) ** 2), float(abs(e_j) ** 2)


def golden_section(f, lo: float, hi: float, tol: float = 1e-7) -> float:
    """Minimiser of a unimodal ``f`` on ``[lo, hi]``."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def set_dark_port(soa_up: SOAParams, soa_low: SOAParams, probe_power: float) -> float:
    """Bias phase that extinguishes port I for the probe alone (no pump)."""
    if probe_power <= 0:
        raise ValueError("probe_power must be positive")
    h_up = steady_state_h(soa_up, probe_power / 2.0)
    h_low = steady_state_h(soa_low, probe_power / 2.0)

    def p_i(phi):
        return static_port_powers(h_up, h_low, soa_up.alpha, soa_low.alpha, probe_power, phi)[0]

    # coarse scan to bracket the single minimum over one period, then refine
    phis = np.linspace(0.0, TWO_PI, 64, endpoint=False)
    k = int(np.argmin([p_i(p) for p in phis]))
    step = TWO_PI / 64
    best = golden_section(p_i, phis[k] - step, phis[k] + step, tol=1e-8)
    return best % TWO_PI
