"""Per-peak amplitude normalization and frame-label alignment."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass

import numpy as np

from .bvp import PulseTrace
from .peaks import PeakSeries

log = logging.getLogger(__name__)

ALIGN_PAD_S = 1.0


@dataclass(frozen=True)
class AmplitudeEnvelope:
    timestamps: np.ndarray
    values: np.ndarray  # normalized to [0,1] across the recording

    def __post_init__(self):
        object.__setattr__(self, "timestamps", np.asarray(self.timestamps, dtype=np.float64))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))

    def __len__(self) -> int:
        return len(self.timestamps)


def normalize_amplitudes(peaks: PeakSeries) -> AmplitudeEnvelope:
    """Affine rescale of raw peak amplitudes to [0,1] over the whole series.
    An all-equal series maps to 0.5 everywhere (mid-scale neutral label)."""
    if len(peaks) < 2:
        raise ValueError(f"need at least 2 peaks to normalize, got {len(peaks)}")
    raw = peaks.amplitudes
    lo, hi = float(raw.min()), float(raw.max())
    if hi - lo <= 0.0:
        values = np.full_like(raw, 0.5)
    else:
        values = (raw - lo) / (hi - lo)
    return AmplitudeEnvelope(timestamps=peaks.timestamps.copy(), values=values)


def align_to_frames(envelope: AmplitudeEnvelope, frame_timestamps: np.ndarray,
                    pad: float = ALIGN_PAD_S) -> tuple[np.ndarray, np.ndarray]:
    """Zero-order-hold labels: each frame takes the most recent peak's
    normalized amplitude (frames slightly before the first peak, within the
    pad, take the first peak's value).

    Returns (labels, kept) where kept marks frames inside the padded span;
    frames outside are dropped and counted in the log.
    """
    if len(envelope) == 0:
        raise ValueError("empty envelope")
    ts = np.asarray(frame_timestamps, dtype=np.float64)
    first, last = envelope.timestamps[0], envelope.timestamps[-1]
    kept = (ts >= first - pad) & (ts <= last + pad)
    dropped = int((~kept).sum())
    if dropped:
        log.info("align_to_frames: dropped %d of %d frames outside envelope span",
                 dropped, len(ts))
    idx = np.searchsorted(envelope.timestamps, ts[kept], side="right") - 1
    idx = np.clip(idx, 0, len(envelope) - 1)  # pre-first-peak backfill
    return envelope.values[idx], kept


def write_trace_csv(trace: PulseTrace, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp_s", "value"])
        for t, v in zip(trace.timestamps, trace.values):
            writer.writerow([repr(float(t)), repr(float(v))])


def read_trace_csv(path, sample_rate: float) -> PulseTrace:
    ts, vs = [], []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["timestamp_s", "value"]:
            raise ValueError(f"unexpected trace header {header!r}")
        for row in reader:
            ts.append(float(row[0]))
            vs.append(float(row[1]))
    return PulseTrace(np.array(ts), np.array(vs), sample_rate)


def write_envelope_csv(envelope: AmplitudeEnvelope, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["timestamp_s", "normalized_amplitude"])
        for t, v in zip(envelope.timestamps, envelope.values):
            writer.writerow([repr(float(t)), repr(float(v))])


def read_envelope_csv(path) -> AmplitudeEnvelope:
    ts, vs = [], []
    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["timestamp_s", "normalized_amplitude"]:
            raise ValueError(f"unexpected envelope header {header!r}")
        for row in reader:
            ts.append(float(row[0]))
            vs.append(float(row[1]))
    return AmplitudeEnvelope(np.array(ts), np.array(vs))
