"""Recording-to-feature-table pipeline shared by the CLI and the library.

Per recording: low-pass filter, detect beats once over the whole record,
then per sliding window compute the 20 HRV features from the window's
intervals and the 24 waveform features from the window's samples.  Windows
with any undefined (NaN) feature are dropped, not imputed, and the drop
count is reported per subject.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .beats import detect_beats, extract_ibi
from .bvp_features import BVP_FEATURE_NAMES, bvp_feature_vector
from .config import RunConfig
from .dataset import Dataset, LabeledWindow, SubjectRecording, bin_pain, label_window, segment_windows
from .hrv import HRV_FEATURE_NAMES, hrv_feature_vector
from .signal_core import SampledSignal, butterworth_lowpass
from .utils import parallel_map

__all__ = ["FEATURE_COLUMNS", "extract_recording", "extract_dataset", "ExtractionLog"]

log = logging.getLogger(__name__)

#: The canonical 44-column feature order: 20 HRV then 24 waveform features.
FEATURE_COLUMNS = tuple(HRV_FEATURE_NAMES + BVP_FEATURE_NAMES)


@dataclass
class ExtractionLog:
    """Per-subject kept/dropped window counts."""

    kept: dict
    dropped: dict

    def total_kept(self) -> int:
        return sum(self.kept.values())

    def total_dropped(self) -> int:
        return sum(self.dropped.values())


def _window_features(window: SampledSignal, beat_times: np.ndarray, cfg: RunConfig) -> np.ndarray:
    start = window.start_time_s
    end = start + window.duration_s
    local_beats = beat_times[(beat_times >= start) & (beat_times < end)]
    ibi = extract_ibi(
        local_beats,
        min_ms=cfg.ibi_min_ms,
        max_ms=cfg.ibi_max_ms,
        clean=cfg.ibi_clean,
    )
    hrv = hrv_feature_vector(
        ibi,
        resample_hz=cfg.tachogram_hz,
        apen_m=cfg.apen_m,
        apen_r_factor=cfg.apen_r_factor,
    )
    bvp = bvp_feature_vector(
        window.samples,
        window.sample_rate_hz,
        ami_tau=cfg.ami_tau,
        ami_bins=cfg.ami_bins,
        periodicity_threshold=cfg.periodicity_threshold,
    )
    return np.concatenate([hrv.to_array(), bvp.to_array()])


def extract_recording(rec: SubjectRecording, cfg: RunConfig) -> tuple[list[LabeledWindow], int]:
    """Labeled feature windows for one recording plus the dropped count."""
    filtered = butterworth_lowpass(rec.bvp, cfg.filter_cutoff_hz, cfg.filter_order)
    beat_times = detect_beats(
        filtered,
        window_s=cfg.beat_window_s,
        std_factor=cfg.beat_std_factor,
        refractory_s=cfg.beat_refractory_s,
    )
    starts = segment_windows(rec.bvp.duration_s, cfg.window_len_s, cfg.window_overlap)
    fs = rec.bvp.sample_rate_hz
    samples_per_window = int(round(cfg.window_len_s * fs))

    def one(start: float):
        i0 = int(round(start * fs))
        window = SampledSignal(fs, filtered.samples[i0 : i0 + samples_per_window], start_time_s=start)
        return _window_features(window, beat_times, cfg)

    feature_rows = parallel_map(one, list(starts), n_jobs=cfg.n_jobs)
    windows = []
    dropped = 0
    for start, features in zip(starts, feature_rows):
        if np.any(~np.isfinite(features)):
            dropped += 1
            continue
        score = label_window(start, cfg.window_len_s, rec.epoch_reports)
        windows.append(
            LabeledWindow(
                subject_id=rec.subject_id,
                window_start_s=float(start),
                features=features,
                pain_score=score,
                pain_state=bin_pain(score),
            )
        )
    return windows, dropped


def extract_dataset(recordings, cfg: RunConfig) -> tuple[Dataset, ExtractionLog]:
    """Feature dataset over many recordings; subjects losing every window
    are excluded with a warning."""
    kept: dict = {}
    dropped: dict = {}
    all_windows: list[LabeledWindow] = []
    for rec in recordings:
        windows, n_dropped = extract_recording(rec, cfg)
        kept[rec.subject_id] = len(windows)
        dropped[rec.subject_id] = n_dropped
        if not windows:
            log.warning("subject %s: all windows dropped; subject excluded", rec.subject_id)
            continue
        all_windows.extend(windows)
    ds = Dataset.from_windows(all_windows, FEATURE_COLUMNS)
    return ds, ExtractionLog(kept=kept, dropped=dropped)
