"""Synthetic blood-volume-pulse generation.

Each beat is a fixed asymmetric template (sharp systolic upstroke, slow decay
with a dicrotic bump). The waveform is the template driven at a constant
heart rate, amplitude-modulated by an envelope that pinches as threat rises:

    value(t) = (1 - 0.8 * threat(t)) * template(phase(t)) + noise

The 0.2 envelope floor keeps beats detectable at maximum threat. Noise is
seeded Gaussian, sigma 0.02.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .oracle import ThreatSignal

DEFAULT_SAMPLE_RATE = 51.6
DEFAULT_HEART_RATE = 1.2
NOISE_SIGMA = 0.02
ENVELOPE_PINCH = 0.8

_HR_RANGE = (0.8, 2.5)


@dataclass(frozen=True)
class PulseTrace:
    timestamps: np.ndarray
    values: np.ndarray
    sample_rate: float

    def __post_init__(self):
        object.__setattr__(self, "timestamps", np.asarray(self.timestamps, dtype=np.float64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        if self.timestamps.shape != self.values.shape:
            raise ValueError("trace timestamps/values length mismatch")

    @property
    def duration(self) -> float:
        if len(self.timestamps) < 2:
            return 0.0
        return float(self.timestamps[-1] - self.timestamps[0])


def beat_template(phase: np.ndarray) -> np.ndarray:
    """Template value at phase in [0,1): sharp systolic lobe plus a dicrotic
    bump 0.22 of a period later, unit maximum. The bump sits close enough to
    the main lobe that any heart rate in range keeps it inside the peak
    detector's refractory interval."""
    return _template_raw(phase) / _TEMPLATE_MAX


def _template_raw(phase):
    phase = np.asarray(phase, dtype=np.float64) % 1.0
    return np.exp(-((phase - 0.18) / 0.07) ** 2) + 0.35 * np.exp(-((phase - 0.40) / 0.12) ** 2)


_PHASE_GRID = np.linspace(0.0, 1.0, 20001)[:-1]
_TEMPLATE_MAX = float(_template_raw(_PHASE_GRID).max())
TEMPLATE_PEAK_PHASE = float(_PHASE_GRID[int(_template_raw(_PHASE_GRID).argmax())])


def beat_peak_times(t_start: float, t_end: float, heart_rate: float) -> np.ndarray:
    """Ground-truth systolic peak times for the generated schedule; beats are
    anchored at integer multiples of the period from t_start."""
    period = 1.0 / heart_rate
    first = t_start + TEMPLATE_PEAK_PHASE * period
    times = np.arange(first, t_end, period)
    return times


def synth_bvp(threat: ThreatSignal, heart_rate: float = DEFAULT_HEART_RATE,
              sample_rate: float = DEFAULT_SAMPLE_RATE, seed: int = 0,
              duration: float | None = None) -> PulseTrace:
    """Synthesize a pulse trace over the threat signal's span (or `duration`
    seconds from its start). Deterministic per seed."""
    if not _HR_RANGE[0] <= heart_rate <= _HR_RANGE[1]:
        raise ValueError(f"heart_rate {heart_rate} outside {_HR_RANGE}")
    span = threat.t_end - threat.t_start
    if duration is None:
        duration = span
    elif duration > span + 1e-9:
        raise ValueError(
            f"threat signal covers {span:.3f} s but {duration:.3f} s requested"
        )
    n = int(np.floor(duration * sample_rate)) + 1
    if n < 2:
        raise ValueError("requested duration yields fewer than 2 samples")

    t = threat.t_start + np.arange(n) / sample_rate
    envelope = 1.0 - ENVELOPE_PINCH * threat.at(t)
    phase = (t - threat.t_start) * heart_rate
    values = envelope * beat_template(phase)
    rng = np.random.default_rng(seed)
    values = values + rng.normal(0.0, NOISE_SIGMA, size=n)
    return PulseTrace(timestamps=t, values=values, sample_rate=sample_rate)


def constant_threat(duration: float, level: float, dt: float = 0.05) -> ThreatSignal:
    t = np.arange(0.0, duration + dt, dt)
    return ThreatSignal(timestamps=t, values=np.full_like(t, float(level)))
