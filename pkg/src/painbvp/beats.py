"""Systolic peak detection and inter-beat-interval extraction.

The detector is threshold-relative (rolling mean + rolling std), so it is
invariant to amplitude scaling and baseline offsets, and a refractory
period caps the beat rate at 240 bpm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps

from .errors import InsufficientDataError, InvalidInputError, InvalidParameterError
from .signal_core import SampledSignal, as_float_array

__all__ = ["IbiSeries", "detect_beats", "extract_ibi"]

#: Physiological gate for retained intervals (30..200 bpm).
IBI_MIN_MS = 300.0
IBI_MAX_MS = 2000.0


@dataclass(frozen=True)
class IbiSeries:
    """Beat times plus the retained inter-beat intervals in milliseconds.

    ``intervals_ms[i]`` is the gap of one consecutive beat pair and
    ``interval_times_s[i]`` is the time of that pair's later beat.  Cleaning
    removes out-of-range intervals without merging their neighbours, so the
    interval arrays can be shorter than ``len(beat_times_s) - 1``.
    """

    beat_times_s: np.ndarray
    intervals_ms: np.ndarray
    interval_times_s: np.ndarray

    def __post_init__(self):
        bt = as_float_array(self.beat_times_s, "beat_times_s")
        iv = as_float_array(self.intervals_ms, "intervals_ms")
        it = as_float_array(self.interval_times_s, "interval_times_s")
        if len(bt) >= 2 and np.any(np.diff(bt) <= 0):
            raise InvalidInputError("beat times must be strictly ascending")
        if len(iv) != len(it):
            raise InvalidInputError("intervals_ms and interval_times_s must align")
        if np.any(iv <= 0):
            raise InvalidInputError("intervals must be positive")
        object.__setattr__(self, "beat_times_s", bt)
        object.__setattr__(self, "intervals_ms", iv)
        object.__setattr__(self, "interval_times_s", it)

    @property
    def n_intervals(self) -> int:
        return len(self.intervals_ms)

    @classmethod
    def empty(cls) -> "IbiSeries":
        return cls(np.empty(0), np.empty(0), np.empty(0))


def _rolling_mean_std(x: np.ndarray, win: int):
    """Centered rolling mean/std with truncated edge windows."""
    n = len(x)
    half = win // 2
    csum = np.concatenate(([0.0], np.cumsum(x)))
    csum2 = np.concatenate(([0.0], np.cumsum(x * x)))
    idx = np.arange(n)
    lo = np.maximum(idx - half, 0)
    hi = np.minimum(idx + half + 1, n)
    count = (hi - lo).astype(np.float64)
    mean = (csum[hi] - csum[lo]) / count
    var = (csum2[hi] - csum2[lo]) / count - mean * mean
    std = np.sqrt(np.maximum(var, 0.0))
    return mean, std


def detect_beats(
    bvp: SampledSignal,
    window_s: float = 2.0,
    std_factor: float = 0.5,
    refractory_s: float = 0.25,
) -> np.ndarray:
    """Detect systolic peaks in an (already low-pass filtered) BVP signal.

    A sample is a beat if it is a local maximum above an adaptive threshold
    of rolling mean + ``std_factor`` * rolling std over ``window_s``, and no
    higher accepted peak lies within the refractory period.  Returns beat
    times in seconds at sample resolution; an empty array when nothing
    crosses the threshold.
    """
    if window_s <= 0 or refractory_s <= 0:
        raise InvalidParameterError("window_s and refractory_s must be positive")
    if bvp.duration_s < 2.0:
        raise InsufficientDataError(f"need at least 2 s of signal, got {bvp.duration_s:.3f} s")
    x = bvp.samples
    win = max(3, int(round(window_s * bvp.sample_rate_hz)))
    mean, std = _rolling_mean_std(x, win)
    threshold = mean + std_factor * std
    distance = max(1, int(round(refractory_s * bvp.sample_rate_hz)))
    idx, _ = sps.find_peaks(x, height=threshold, distance=distance)
    return bvp.start_time_s + idx / bvp.sample_rate_hz


def extract_ibi(
    beat_times_s,
    min_ms: float = IBI_MIN_MS,
    max_ms: float = IBI_MAX_MS,
    clean: bool = True,
) -> IbiSeries:
    """Successive beat differences in ms, gated to a physiological range.

    Intervals outside ``[min_ms, max_ms]`` are dropped outright (neighbours
    are not merged across the gap).  Set ``clean=False`` to keep every
    interval.  Fewer than two beats yields an empty series.
    """
    bt = as_float_array(beat_times_s, "beat_times_s")
    if len(bt) >= 2 and np.any(np.diff(bt) <= 0):
        raise InvalidInputError("beat times must be strictly ascending")
    if len(bt) < 2:
        return IbiSeries(bt, np.empty(0), np.empty(0))
    intervals = np.diff(bt) * 1000.0
    times = bt[1:]
    if clean:
        keep = (intervals >= min_ms) & (intervals <= max_ms)
        intervals = intervals[keep]
        times = times[keep]
    return IbiSeries(bt, intervals, times)
