"""Synthetic pulse physiology: threat oracle, BVP synthesis, peaks, labels."""

from .bvp import (
    DEFAULT_HEART_RATE,
    DEFAULT_SAMPLE_RATE,
    ENVELOPE_PINCH,
    NOISE_SIGMA,
    TEMPLATE_PEAK_PHASE,
    PulseTrace,
    beat_peak_times,
    beat_template,
    constant_threat,
    synth_bvp,
)
from .envelope import (
    AmplitudeEnvelope,
    align_to_frames,
    normalize_amplitudes,
    read_envelope_csv,
    read_trace_csv,
    write_envelope_csv,
    write_trace_csv,
)
from .oracle import ThreatConfig, ThreatSignal, threat_from_state
from .peaks import PeakSeries, bandpass, detect_peaks

__all__ = [
    "ThreatConfig", "ThreatSignal", "threat_from_state",
    "PulseTrace", "synth_bvp", "beat_template", "beat_peak_times",
    "constant_threat",
    "DEFAULT_HEART_RATE", "DEFAULT_SAMPLE_RATE", "NOISE_SIGMA",
    "ENVELOPE_PINCH", "TEMPLATE_PEAK_PHASE",
    "PeakSeries", "detect_peaks", "bandpass",
    "AmplitudeEnvelope", "normalize_amplitudes", "align_to_frames",
    "write_trace_csv", "read_trace_csv", "write_envelope_csv", "read_envelope_csv",
]
