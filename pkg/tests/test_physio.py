"""Physio pipeline tests: threat oracle, BVP synthesis, peaks, labels."""

import math

import numpy as np
import pytest

from pulsedrive import physio, sim
from pulsedrive.physio import (
    AmplitudeEnvelope,
    PeakSeries,
    PulseTrace,
    ThreatSignal,
)


def car(speed=0.0):
    return sim.CarState(x=0.0, y=0.0, heading=0.0, speed=speed)


def events(d, collided=False):
    return sim.StepEvents(collided=collided, reached_goal=False, distance_to_wall=d)


class TestThreatOracle:
    def test_far_away_is_calm(self):
        assert physio.threat_from_state(car(5.0), events(1e6)) < 1e-10

    def test_collision_saturates(self):
        assert physio.threat_from_state(car(0.0), events(0.0, collided=True)) == 1.0

    def test_formula_at_scale_distance_full_speed(self):
        # w_d*e^-1 + w_v*(v/v_max)*e^-1 with both weights 0.6
        got = physio.threat_from_state(car(5.0), events(2.0))
        assert np.isclose(got, 1.2 * math.exp(-1.0), atol=1e-12)

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            physio.threat_from_state(car(0.0), events(-1.0))


def match_peaks(detected, truth, window=0.1):
    """Greedy one-to-one matching within a time window; returns (tp, fp, fn)."""
    used = np.zeros(len(truth), dtype=bool)
    tp = 0
    for t in detected:
        diffs = np.abs(truth - t)
        diffs[used] = np.inf
        j = int(diffs.argmin())
        if diffs[j] <= window:
            used[j] = True
            tp += 1
    return tp, len(detected) - tp, len(truth) - tp


class TestSynthBvp:
    def test_calm_trace_beats_hit_template_max(self):
        threat = physio.constant_threat(30.0, 0.0)
        trace = physio.synth_bvp(threat, heart_rate=1.0, seed=1)
        noiseless = physio.beat_template(trace.timestamps * 1.0)
        for t_peak in physio.beat_peak_times(0.0, 30.0, 1.0):
            win = np.abs(trace.timestamps - t_peak) <= 0.05
            measured = trace.values[win].max()
            oracle = noiseless[win].max()  # discrete-grid template maximum
            assert abs(oracle - 1.0) < 0.02
            assert abs(measured - oracle) <= 3.5 * physio.NOISE_SIGMA

    def test_max_threat_scales_peaks_to_fifth(self):
        calm = physio.synth_bvp(physio.constant_threat(30.0, 0.0), heart_rate=1.0, seed=2)
        tense = physio.synth_bvp(physio.constant_threat(30.0, 1.0), heart_rate=1.0, seed=2)
        truth = physio.beat_peak_times(0.0, 30.0, 1.0)
        idx = np.searchsorted(calm.timestamps, truth)
        ratio = calm.values[idx].mean() / tense.values[idx].mean()
        assert 4.0 < ratio < 6.0

    def test_step_threat_pinches_detected_amplitudes(self):
        t = np.arange(0.0, 20.05, 0.05)
        vals = np.where(t < 10.0, 0.0, 1.0)
        trace = physio.synth_bvp(ThreatSignal(t, vals), heart_rate=1.0, seed=3)
        peaks = physio.detect_peaks(trace)
        before = peaks.amplitudes[peaks.timestamps < 9.5]
        after = peaks.amplitudes[peaks.timestamps > 10.5]
        assert len(before) >= 5 and len(after) >= 5
        ratio = before.mean() / after.mean()
        assert 4.0 < ratio < 6.0

    def test_coverage_gap_rejected(self):
        threat = physio.constant_threat(5.0, 0.0)
        with pytest.raises(ValueError, match="covers"):
            physio.synth_bvp(threat, duration=10.0)

    def test_heart_rate_bounds(self):
        threat = physio.constant_threat(10.0, 0.0)
        with pytest.raises(ValueError, match="heart_rate"):
            physio.synth_bvp(threat, heart_rate=3.5)

    def test_deterministic_per_seed(self):
        threat = physio.constant_threat(10.0, 0.3)
        a = physio.synth_bvp(threat, seed=9)
        b = physio.synth_bvp(threat, seed=9)
        assert np.array_equal(a.values, b.values)


class TestDetectPeaks:
    def test_noiseless_one_hz_count_and_spacing(self):
        # noiseless trace built directly from the template (oracle input)
        fs = physio.DEFAULT_SAMPLE_RATE
        t = np.arange(0.0, 60.0, 1.0 / fs)
        values = physio.beat_template(t * 1.0)
        trace = PulseTrace(t, values, fs)
        peaks = physio.detect_peaks(trace)
        assert 59 <= len(peaks) <= 61
        spacing = np.diff(peaks.timestamps)
        assert np.all(np.abs(spacing - 1.0) < 0.05)
        # soundness against brute-force raw local maxima above mid-amplitude
        raw_max = [
            i for i in range(1, len(values) - 1)
            if values[i] > values[i - 1] and values[i] > values[i + 1] and values[i] > 0.5
        ]
        raw_times = t[raw_max]
        for pt in peaks.timestamps:
            assert np.abs(raw_times - pt).min() < 0.05

    def test_constant_trace_has_no_peaks(self):
        fs = 51.6
        t = np.arange(0.0, 5.0, 1.0 / fs)
        trace = PulseTrace(t, np.full_like(t, 2.5), fs)
        assert len(physio.detect_peaks(trace)) == 0

    def test_short_trace_rejected(self):
        fs = 51.6
        t = np.arange(0.0, 2.0, 1.0 / fs)
        with pytest.raises(ValueError, match="at least"):
            physio.detect_peaks(PulseTrace(t, np.zeros_like(t), fs))

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_precision_recall_against_generator_schedule(self, seed):
        rng = np.random.default_rng(seed)
        t = np.arange(0.0, 60.05, 0.05)
        # smooth random threat walk in [0, 0.9]
        level = np.clip(np.cumsum(rng.normal(0, 0.02, len(t))), 0, None)
        level = 0.9 * (level - level.min()) / max(level.max() - level.min(), 1e-9)
        trace = physio.synth_bvp(ThreatSignal(t, level), heart_rate=1.2, seed=seed)
        truth = physio.beat_peak_times(0.0, 60.0, 1.2)
        peaks = physio.detect_peaks(trace)
        tp, fp, fn = match_peaks(peaks.timestamps, truth)
        precision = tp / max(tp + fp, 1)
        recall = tp / max(tp + fn, 1)
        assert precision >= 0.95, f"precision {precision:.3f}"
        assert recall >= 0.95, f"recall {recall:.3f}"

    def test_peaks_are_strict_local_maxima_of_filtered_trace(self):
        threat = physio.constant_threat(30.0, 0.4)
        trace = physio.synth_bvp(threat, seed=5)
        filtered = physio.bandpass(trace)
        peaks = physio.detect_peaks(trace)
        fs = trace.sample_rate
        half = int(round(0.25 * fs))
        for pt in peaks.timestamps:
            idx = int(np.argmin(np.abs(trace.timestamps - pt)))
            lo, hi = max(0, idx - half), min(len(filtered), idx + half + 1)
            assert filtered[idx] == filtered[lo:hi].max()
            assert np.sum(filtered[lo:hi] == filtered[idx]) == 1


class TestNormalize:
    def test_affine_rescale(self):
        peaks = PeakSeries(np.array([1.0, 2.0, 3.0]), np.array([2.0, 4.0, 6.0]))
        env = physio.normalize_amplitudes(peaks)
        assert np.allclose(env.values, [0.0, 0.5, 1.0])

    def test_degenerate_all_equal_maps_to_half(self):
        peaks = PeakSeries(np.array([1.0, 2.0, 3.0]), np.array([3.0, 3.0, 3.0]))
        env = physio.normalize_amplitudes(peaks)
        assert np.all(env.values == 0.5)

    def test_output_spans_unit_interval(self):
        rng = np.random.default_rng(4)
        amps = rng.uniform(0.2, 1.0, 50)
        peaks = PeakSeries(np.sort(rng.uniform(0, 100, 50)), amps)
        env = physio.normalize_amplitudes(peaks)
        assert env.values.min() == 0.0 and env.values.max() == 1.0

    def test_idempotent_under_affine_rescale(self):
        rng = np.random.default_rng(5)
        ts = np.sort(rng.uniform(0, 60, 30))
        amps = rng.uniform(0.2, 1.0, 30)
        once = physio.normalize_amplitudes(PeakSeries(ts, amps))
        rescaled = PeakSeries(ts, once.values * 3.7 + 1.2)
        twice = physio.normalize_amplitudes(rescaled)
        assert np.allclose(once.values, twice.values)

    def test_too_few_peaks_rejected(self):
        with pytest.raises(ValueError, match="at least 2"):
            physio.normalize_amplitudes(PeakSeries(np.array([1.0]), np.array([2.0])))


class TestAlign:
    def env(self):
        return AmplitudeEnvelope(np.array([1.0, 2.0, 3.0]), np.array([0.1, 0.9, 0.4]))

    def test_frame_at_peak_takes_its_value(self):
        labels, kept = physio.align_to_frames(self.env(), np.array([2.0]))
        assert kept.all() and labels[0] == 0.9

    def test_zero_order_hold_between_peaks(self):
        labels, _ = physio.align_to_frames(self.env(), np.array([2.2, 2.8]))
        assert labels[0] == labels[1] == 0.9

    def test_pre_first_peak_backfill_within_pad(self):
        labels, kept = physio.align_to_frames(self.env(), np.array([0.5]))
        assert kept.all() and labels[0] == 0.1

    def test_out_of_span_frames_dropped(self):
        labels, kept = physio.align_to_frames(self.env(), np.array([-0.5, 2.0, 4.5]))
        assert list(kept) == [False, True, False]
        assert len(labels) == 1

    def test_twenty_fps_labels_run_in_beat_length_groups(self):
        threat = physio.constant_threat(60.0, 0.0)
        trace = physio.synth_bvp(threat, heart_rate=1.0, seed=6)
        env = physio.normalize_amplitudes(physio.detect_peaks(trace))
        frame_ts = np.arange(0.0, 60.0, 0.05)
        labels, kept = physio.align_to_frames(env, frame_ts)
        assert kept.sum() >= 1100
        # count run lengths of identical consecutive labels
        change = np.flatnonzero(np.diff(labels) != 0)
        runs = np.diff(np.concatenate([[0], change + 1, [len(labels)]]))
        interior = runs[1:-1]
        assert np.median(interior) == 20
        assert np.all(labels >= 0) and np.all(labels <= 1)


def test_envelope_monotone_in_threat_level():
    calm = physio.synth_bvp(physio.constant_threat(60.0, 0.2), seed=7)
    tense = physio.synth_bvp(physio.constant_threat(60.0, 0.8), seed=8)
    calm_amp = physio.detect_peaks(calm).amplitudes.mean()
    tense_amp = physio.detect_peaks(tense).amplitudes.mean()
    assert calm_amp > tense_amp


def test_trace_and_envelope_csv_round_trip(tmp_path):
    threat = physio.constant_threat(10.0, 0.3)
    trace = physio.synth_bvp(threat, seed=11)
    p = tmp_path / "trace.csv"
    physio.write_trace_csv(trace, p)
    again = physio.read_trace_csv(p, trace.sample_rate)
    assert np.array_equal(trace.timestamps, again.timestamps)
    assert np.array_equal(trace.values, again.values)

    env = physio.normalize_amplitudes(physio.detect_peaks(trace))
    q = tmp_path / "env.csv"
    physio.write_envelope_csv(env, q)
    back = physio.read_envelope_csv(q)
    assert np.array_equal(env.values, back.values)
