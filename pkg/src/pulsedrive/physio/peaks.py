"""Systolic peak detection.

The trace is band-passed with a difference of centered moving averages
(pass band roughly 0.7-3.0 Hz at the default sample rate), then strict local
maxima above an amplitude threshold are kept subject to a refractory
interval, strongest first. Every reported peak is a strict local maximum of
the filtered trace within its +-0.25 s window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bvp import PulseTrace

BAND_LOW_HZ = 0.7
BAND_HIGH_HZ = 3.0
# -3dB cutoff of a boxcar of width W sits near 0.443/W Hz
_MA_CUTOFF_FACTOR = 0.443
REFRACTORY_S = 0.35
THRESHOLD_FRACTION = 0.1  # of the filtered trace's standard deviation
LOCAL_MAX_WINDOW_S = 0.25
MIN_TRACE_SECONDS = 3.0


@dataclass(frozen=True)
class PeakSeries:
    timestamps: np.ndarray
    amplitudes: np.ndarray  # raw trace values at the peaks

    def __post_init__(self):
        object.__setattr__(self, "timestamps", np.asarray(self.timestamps, dtype=np.float64))
        object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=np.float64))
        if self.timestamps.shape != self.amplitudes.shape:
            raise ValueError("peak timestamps/amplitudes length mismatch")
        if len(self.timestamps) > 1 and np.any(np.diff(self.timestamps) <= 0):
            raise ValueError("peak timestamps must be strictly increasing")

    def __len__(self) -> int:
        return len(self.timestamps)


def _centered_moving_average(x: np.ndarray, window: int) -> np.ndarray:
    window = max(1, window | 1)  # odd so the filter is zero-phase
    kernel = np.ones(window)
    sums = np.convolve(x, kernel, mode="same")
    counts = np.convolve(np.ones_like(x), kernel, mode="same")
    return sums / counts


def _long_window_samples(fs: float) -> int:
    return int(round(fs * _MA_CUTOFF_FACTOR / BAND_LOW_HZ))


def bandpass(trace: PulseTrace) -> np.ndarray:
    fs = trace.sample_rate
    short = _centered_moving_average(trace.values, int(round(fs * _MA_CUTOFF_FACTOR / BAND_HIGH_HZ)))
    long = _centered_moving_average(trace.values, _long_window_samples(fs))
    return short - long


def detect_peaks(trace: PulseTrace) -> PeakSeries:
    if trace.duration < MIN_TRACE_SECONDS:
        raise ValueError(
            f"trace covers {trace.duration:.2f} s; need at least {MIN_TRACE_SECONDS} s"
        )
    f = bandpass(trace)
    n = len(f)
    fs = trace.sample_rate

    threshold = THRESHOLD_FRACTION * float(f.std())
    if threshold <= 0.0:
        return PeakSeries(np.empty(0), np.empty(0))

    # the long moving average is distorted near the edges; guard that region
    guard = max(1, _long_window_samples(fs) // 2)
    interior = np.arange(max(1, guard), min(n - 1, n - guard))
    is_max = (f[interior] > f[interior - 1]) & (f[interior] > f[interior + 1])
    candidates = interior[is_max & (f[interior] >= threshold)]
    if candidates.size == 0:
        return PeakSeries(np.empty(0), np.empty(0))

    # strongest-first refractory suppression
    refractory = int(round(REFRACTORY_S * fs))
    order = candidates[np.argsort(f[candidates])[::-1]]
    taken = np.zeros(n, dtype=bool)
    kept = []
    for idx in order:
        lo, hi = max(0, idx - refractory), min(n, idx + refractory + 1)
        if taken[lo:hi].any():
            continue
        taken[idx] = True
        kept.append(idx)

    # enforce the local-maximum window on whatever survived
    half = int(round(LOCAL_MAX_WINDOW_S * fs))
    final = []
    for idx in sorted(kept):
        lo, hi = max(0, idx - half), min(n, idx + half + 1)
        window = f[lo:hi]
        if f[idx] >= window.max() and np.sum(window == f[idx]) == 1:
            final.append(idx)

    idxs = np.array(final, dtype=np.int64)
    # amplitude read from the raw trace at the nearby raw maximum
    refine = int(round(0.1 * fs))
    amps = np.empty(len(idxs))
    for k, idx in enumerate(idxs):
        lo, hi = max(0, idx - refine), min(n, idx + refine + 1)
        amps[k] = trace.values[lo:hi].max()
    return PeakSeries(timestamps=trace.timestamps[idxs], amplitudes=amps)
